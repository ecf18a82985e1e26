#include "dctnet/matcher.hpp"

#include "dctnet/parallel.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace dctnet {

double cosine_distance(const FeatureVector& a, const FeatureVector& b) {
  if (a.values.size() != b.values.size()) {
    throw std::invalid_argument(
        "cosine_distance: dimension mismatch (" +
        std::to_string(a.values.size()) + " vs " +
        std::to_string(b.values.size()) + ")");
  }
  const double na = a.values.norm();
  const double nb = b.values.norm();
  if (na == 0.0 && nb == 0.0) {
    throw std::invalid_argument(
        "cosine_distance: undefined for two zero vectors");
  }
  if (na == 0.0 || nb == 0.0) return 1.0;
  const double similarity = a.values.dot(b.values) / (na * nb);
  return std::clamp(1.0 - similarity, 0.0, 2.0);
}

MatchResult identify(const FeatureVector& probe, const GallerySet& gallery) {
  if (gallery.entries.empty()) {
    throw std::invalid_argument("identify: empty gallery");
  }
  MatchResult best;
  best.entry_index = 0;
  best.subject = gallery.entries[0].subject;
  best.distance = cosine_distance(probe, gallery.entries[0].feature);
  for (size_t i = 1; i < gallery.entries.size(); ++i) {
    const double d = cosine_distance(probe, gallery.entries[i].feature);
    // Strict < keeps the lowest index on exact ties.
    if (d < best.distance) {
      best.distance = d;
      best.subject = gallery.entries[i].subject;
      best.entry_index = i;
    }
  }
  return best;
}

EvalReport score_probes(const GallerySet& gallery,
                        const std::vector<ProbeRecord>& probes,
                        const std::string& config_echo) {
  std::vector<MatchResult> results(probes.size());
  parallel_for(probes.size(), [&](size_t i) {
    results[i] = identify(probes[i].feature, gallery);
  });

  EvalReport report;
  report.config_echo = config_echo;
  std::unordered_map<std::string, size_t> group_index;
  for (size_t i = 0; i < probes.size(); ++i) {
    auto [it, inserted] =
        group_index.emplace(probes[i].group, report.groups.size());
    if (inserted) {
      GroupResult g;
      g.label = probes[i].group;
      report.groups.push_back(g);
    }
    GroupResult& g = report.groups[it->second];
    ++g.total;
    if (results[i].subject == probes[i].subject) ++g.correct;
  }

  double sum = 0.0;
  for (GroupResult& g : report.groups) {
    g.rate_percent = 100.0 * g.correct / g.total;
    sum += g.rate_percent;
  }
  report.average_percent =
      report.groups.empty() ? 0.0 : sum / report.groups.size();
  return report;
}

std::string EvalReport::to_text() const {
  size_t label_width = std::string("average").size();
  for (const GroupResult& g : groups) {
    label_width = std::max(label_width, g.label.size());
  }

  std::ostringstream out;
  out << "rank-1 identification by probe group\n\n";
  out << "  " << std::left << std::setw(static_cast<int>(label_width) + 2)
      << "group" << std::right << std::setw(8) << "rate%" << std::setw(9)
      << "correct" << std::setw(8) << "probes" << "\n";

  int total_correct = 0;
  int total_probes = 0;
  out << std::fixed << std::setprecision(2);
  for (const GroupResult& g : groups) {
    out << "  " << std::left << std::setw(static_cast<int>(label_width) + 2)
        << g.label << std::right << std::setw(8) << g.rate_percent
        << std::setw(9) << g.correct << std::setw(8) << g.total << "\n";
    total_correct += g.correct;
    total_probes += g.total;
  }
  out << "  " << std::left << std::setw(static_cast<int>(label_width) + 2)
      << "average" << std::right << std::setw(8) << average_percent
      << std::setw(9) << total_correct << std::setw(8) << total_probes
      << "\n";
  out << "\naverage is the mean of the per-group rates\n";
  if (!config_echo.empty()) {
    out << "\nconfig:\n";
    std::istringstream lines(config_echo);
    std::string line;
    while (std::getline(lines, line)) out << "  " << line << "\n";
  }
  return out.str();
}

std::string EvalReport::to_csv() const {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  out << "group,rate_percent,n_probes\n";
  int total_probes = 0;
  for (const GroupResult& g : groups) {
    out << g.label << "," << g.rate_percent << "," << g.total << "\n";
    total_probes += g.total;
  }
  out << "avg," << average_percent << "," << total_probes << "\n";
  return out.str();
}

}  // namespace dctnet
