#ifndef EVCOREF_EDIT_DISTANCE_H_
#define EVCOREF_EDIT_DISTANCE_H_

#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "evcoref/corpus.h"

namespace evcoref {

// Per-character edit costs over bytes. Every cost lies in (0, 1]; matching a
// character with itself is free. Unset operations cost 1.
class EditWeights {
 public:
  static constexpr double kDefaultCost = 1.0;

  EditWeights();

  // Symmetrized: min(sub(a, b), sub(b, a)); 0 when a == b.
  double Substitution(char a, char b) const;
  // Raw directional costs as stored.
  double RawSubstitution(char from, char to) const;
  double Insertion(char c) const { return insertion_[Byte(c)]; }
  double Deletion(char c) const { return deletion_[Byte(c)]; }
  // Cost of inserting or deleting c in either direction: min(ins, del).
  double Indel(char c) const;

  void SetSubstitution(char from, char to, double cost);
  void SetInsertion(char c, double cost);
  void SetDeletion(char c, double cost);

  // Smallest insertion/deletion cost; lower-bounds the price of each
  // character of length difference between two strings.
  double MinIndelCost() const;
  double MinCost() const;
  bool IsUniform() const;

  // Plain-text table "op<TAB>args<TAB>cost" listing non-default entries.
  // op is sub, ins or del; args are the characters separated by a space,
  // with bytes outside printable ASCII (and space, backslash) written \xHH.
  void Write(std::ostream& out) const;
  static EditWeights Read(std::istream& in);

  bool operator==(const EditWeights&) const = default;

 private:
  static size_t Byte(char c) { return static_cast<unsigned char>(c); }

  std::vector<double> substitution_;  // 256 x 256, row = from
  std::vector<double> insertion_;
  std::vector<double> deletion_;
};

// Dynamic program over the costs in `weights`, with symmetrized
// substitution and indel costs, so the result is symmetric in (a, b).
double WeightedEditDistance(std::string_view a, std::string_view b,
                            const EditWeights& weights);

// Unit-cost Levenshtein distance.
size_t LevenshteinDistance(std::string_view a, std::string_view b);

// Operation counts gathered from aligned alias pairs.
struct EditTally {
  std::vector<size_t> substitution;  // 256 x 256, row = from
  std::vector<size_t> insertion;
  std::vector<size_t> deletion;

  EditTally();
  size_t MaxCount() const;
};

// Aligns the words of both variants, then the characters of each aligned
// word pair, and counts the edit operations on the alignment path.
EditTally TallyEdits(const AliasPairs& pairs);

// cost(op) = max(0.1, 1 - count(op) / (max_count + 1)); unseen ops keep 1.
EditWeights TrainEditWeights(const AliasPairs& pairs);

}  // namespace evcoref

#endif  // EVCOREF_EDIT_DISTANCE_H_
