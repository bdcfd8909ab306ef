#include "evcoref/cluster.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_set>

#include "evcoref/text_io.h"

namespace evcoref {

void ClusterConfig::Validate() const {
  if (!std::isfinite(tau) || tau < 0.0) {
    throw ConfigError("tau must be a finite non-negative number");
  }
  if (!std::isfinite(window_days) || window_days <= 0.0) {
    throw ConfigError("window_days must be positive");
  }
}

void Cluster::Add(size_t position, const FeatureVector& v,
                  std::int64_t timestamp) {
  members.push_back(position);
  timestamp_sum += timestamp;
  std::vector<std::pair<FeatureIndex, double>> merged;
  merged.reserve(centroid_sum.size() + v.entries.size());
  auto i = centroid_sum.begin();
  auto j = v.entries.begin();
  while (i != centroid_sum.end() || j != v.entries.end()) {
    if (j == v.entries.end() || (i != centroid_sum.end() && i->first < j->first)) {
      merged.push_back(*i++);
    } else if (i == centroid_sum.end() || j->first < i->first) {
      merged.push_back(*j++);
    } else {
      merged.emplace_back(i->first, i->second + j->second);
      ++i;
      ++j;
    }
  }
  centroid_sum = std::move(merged);
  centroid_norm = L2Norm(centroid_sum);
}

bool IsActive(const Cluster& cluster, std::int64_t now,
              const ClusterConfig& config) {
  double distance = std::abs(static_cast<double>(now) - cluster.MeanTime());
  return distance <= config.window_days * kSecondsPerDay;
}

double CentroidSimilarity(const FeatureVector& doc, const Cluster& cluster) {
  if (doc.norm == 0.0 || cluster.centroid_norm == 0.0) return 0.0;
  double value =
      Dot(doc.entries, cluster.centroid_sum) / (doc.norm * cluster.centroid_norm);
  return std::clamp(value, 0.0, 1.0);
}

ClusterMatch MaxSimilarity(const FeatureVector& doc,
                           std::span<const Cluster> clusters, std::int64_t now,
                           const ClusterConfig& config) {
  ClusterMatch best;
  for (const Cluster& cluster : clusters) {
    if (!IsActive(cluster, now, config)) continue;
    double score = CentroidSimilarity(doc, cluster);
    if (!best.cluster || score > best.score) {
      best.cluster = cluster.id;
      best.score = score;
    }
  }
  return best;
}

Partition ClusterStream(std::span<const Document> docs,
                        const Vectorizer& vectorizer,
                        const ClusterConfig& config) {
  config.Validate();
  for (size_t i = 1; i < docs.size(); ++i) {
    const Document& a = docs[i - 1];
    const Document& b = docs[i];
    if (b.timestamp < a.timestamp || (b.timestamp == a.timestamp && b.id <= a.id)) {
      throw DataError("documents are not sorted by (timestamp, id) at '" + b.id + "'");
    }
  }

  Partition partition;
  partition.doc_ids.reserve(docs.size());
  partition.assignment.reserve(docs.size());
  // Ids of clusters that may still be active, ascending. Timestamps never
  // decrease along the stream and a cluster's mean time only moves while it
  // is active, so a cluster that falls behind the window stays inactive.
  std::vector<ClusterId> active;

  for (size_t position = 0; position < docs.size(); ++position) {
    const Document& doc = docs[position];
    FeatureVector v = vectorizer(doc);

    std::optional<ClusterId> best;
    double best_score = 0.0;
    size_t kept = 0;
    for (ClusterId id : active) {
      const Cluster& cluster = partition.clusters[id];
      if (!IsActive(cluster, doc.timestamp, config)) continue;
      active[kept++] = id;
      double score = CentroidSimilarity(v, cluster);
      if (!best || score > best_score) {
        best = id;
        best_score = score;
      }
    }
    active.resize(kept);

    ClusterId target;
    if (best && best_score >= config.tau) {
      target = *best;
    } else {
      target = static_cast<ClusterId>(partition.clusters.size());
      Cluster fresh;
      fresh.id = target;
      partition.clusters.push_back(std::move(fresh));
      active.push_back(target);
    }
    partition.clusters[target].Add(position, v, doc.timestamp);
    partition.doc_ids.push_back(doc.id);
    partition.assignment.push_back(target);
  }
  return partition;
}

Partition ClusterStream(std::span<const Document> docs,
                        const FeatureSpace& space, const CorefMap& coref,
                        const FusionConfig& fusion,
                        const ClusterConfig& config) {
  Vectorizer vectorizer(space, coref, fusion);
  return ClusterStream(docs, vectorizer, config);
}

void WritePartition(const Partition& partition, std::ostream& out) {
  for (size_t i = 0; i < partition.doc_ids.size(); ++i) {
    out << partition.doc_ids[i] << '\t' << partition.assignment[i] << '\n';
  }
}

void WriteClusterSummary(const Partition& partition, std::ostream& out) {
  for (const Cluster& cluster : partition.clusters) {
    out << cluster.id << '\t' << cluster.size() << '\t'
        << FormatDouble(cluster.MeanTime()) << '\n';
  }
}

Partition ReadPartition(std::istream& in) {
  Partition partition;
  std::map<std::uint64_t, ClusterId> renumber;
  std::unordered_set<std::string> seen;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::string_view view = StripCarriageReturn(line);
    if (view.empty()) continue;
    auto fields = SplitTabs(view);
    std::uint64_t raw_id = 0;
    bool ok = fields.size() == 2 && !fields[0].empty() && !fields[1].empty();
    if (ok) {
      auto result = std::from_chars(fields[1].data(),
                                    fields[1].data() + fields[1].size(), raw_id);
      ok = result.ec == std::errc() &&
           result.ptr == fields[1].data() + fields[1].size();
    }
    if (!ok) {
      throw DataError("line " + std::to_string(line_number) +
                      ": expected doc_id<TAB>cluster_id");
    }
    std::string doc(fields[0]);
    if (!seen.insert(doc).second) {
      throw DataError("line " + std::to_string(line_number) +
                      ": duplicate document '" + doc + "'");
    }
    auto [it, inserted] = renumber.emplace(
        raw_id, static_cast<ClusterId>(partition.clusters.size()));
    if (inserted) {
      Cluster cluster;
      cluster.id = it->second;
      partition.clusters.push_back(std::move(cluster));
    }
    partition.clusters[it->second].members.push_back(partition.doc_ids.size());
    partition.doc_ids.push_back(std::move(doc));
    partition.assignment.push_back(it->second);
  }
  return partition;
}

}  // namespace evcoref
