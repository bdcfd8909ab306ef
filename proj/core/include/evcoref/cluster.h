#ifndef EVCOREF_CLUSTER_H_
#define EVCOREF_CLUSTER_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evcoref/corpus.h"
#include "evcoref/vectorize.h"

namespace evcoref {

using ClusterId = std::uint32_t;

inline constexpr double kSecondsPerDay = 86400.0;

struct ClusterConfig {
  double tau = 0.1;           // assignment threshold on cosine similarity
  double window_days = 12.0;  // max distance to a cluster's mean time

  void Validate() const;
};

struct Cluster {
  ClusterId id = 0;
  // Stream positions of member documents, in arrival order.
  std::vector<size_t> members;
  // Sum of member vectors; the centroid is its normalized direction.
  std::vector<std::pair<FeatureIndex, double>> centroid_sum;
  double centroid_norm = 0.0;
  std::int64_t timestamp_sum = 0;

  size_t size() const { return members.size(); }
  double MeanTime() const {
    return static_cast<double>(timestamp_sum) / static_cast<double>(size());
  }
  // Adds a member vector to the running sum and refreshes the norm.
  void Add(size_t position, const FeatureVector& v, std::int64_t timestamp);
};

// Hard assignment of a document stream to clusters.
struct Partition {
  std::vector<std::string> doc_ids;    // stream order
  std::vector<ClusterId> assignment;   // parallel to doc_ids
  std::vector<Cluster> clusters;       // indexed by ClusterId

  size_t num_documents() const { return doc_ids.size(); }
  size_t num_clusters() const { return clusters.size(); }
};

// A cluster takes part in comparisons only while its mean time lies within
// the window around `now`.
bool IsActive(const Cluster& cluster, std::int64_t now,
              const ClusterConfig& config);

// Cosine between a document vector and the normalized centroid.
double CentroidSimilarity(const FeatureVector& doc, const Cluster& cluster);

struct ClusterMatch {
  std::optional<ClusterId> cluster;
  double score = 0.0;
};

// Best active cluster; ties go to the lowest cluster id.
ClusterMatch MaxSimilarity(const FeatureVector& doc,
                           std::span<const Cluster> clusters, std::int64_t now,
                           const ClusterConfig& config);

// Single-pass clustering. `docs` must be sorted by (timestamp, id).
Partition ClusterStream(std::span<const Document> docs,
                        const Vectorizer& vectorizer,
                        const ClusterConfig& config);
Partition ClusterStream(std::span<const Document> docs,
                        const FeatureSpace& space, const CorefMap& coref,
                        const FusionConfig& fusion,
                        const ClusterConfig& config);

// "doc_id<TAB>cluster_id" per document, stream order.
void WritePartition(const Partition& partition, std::ostream& out);
// "cluster_id<TAB>size<TAB>mean_time" per cluster.
void WriteClusterSummary(const Partition& partition, std::ostream& out);
// Reads an assignment file. Cluster ids may be arbitrary non-negative
// integers; they are renumbered densely in order of first appearance and
// clusters carry members only.
Partition ReadPartition(std::istream& in);

}  // namespace evcoref

#endif  // EVCOREF_CLUSTER_H_
