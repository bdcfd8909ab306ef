#include "evcoref/edit_distance.h"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <tuple>

#include "evcoref/text_io.h"

namespace evcoref {
namespace {

constexpr size_t kAlphabet = 256;
constexpr double kMinLearnedCost = 0.1;
// Word pairs farther apart than this (relative to the longer word) are not
// aligned: they are different words, not spelling variants.
constexpr double kMaxAlignedWordDistance = 0.5;

void CheckCost(double cost) {
  if (!(cost > 0.0 && cost <= 1.0)) {
    throw DataError("edit cost " + FormatDouble(cost) + " outside (0, 1]");
  }
}

std::string EncodeChar(char c) {
  auto byte = static_cast<unsigned char>(c);
  if (byte > 0x20 && byte < 0x7f && c != '\\') return std::string(1, c);
  static constexpr char kHex[] = "0123456789abcdef";
  return {'\\', 'x', kHex[byte >> 4], kHex[byte & 0xf]};
}

char DecodeChar(std::string_view text) {
  if (text.size() == 1 && text[0] != '\\') return text[0];
  if (text.size() == 4 && text[0] == '\\' && text[1] == 'x' &&
      std::isxdigit(static_cast<unsigned char>(text[2])) &&
      std::isxdigit(static_cast<unsigned char>(text[3]))) {
    return static_cast<char>(std::stoi(std::string(text.substr(2)), nullptr, 16));
  }
  throw DataError("bad character encoding '" + std::string(text) + "'");
}

std::string Lowercase(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

// Full unit-cost table for backtracing.
std::vector<std::vector<size_t>> LevenshteinTable(std::string_view a,
                                                  std::string_view b) {
  std::vector<std::vector<size_t>> d(a.size() + 1,
                                     std::vector<size_t>(b.size() + 1, 0));
  for (size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (size_t i = 1; i <= a.size(); ++i) {
    for (size_t j = 1; j <= b.size(); ++j) {
      size_t sub = d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      d[i][j] = std::min({sub, d[i - 1][j] + 1, d[i][j - 1] + 1});
    }
  }
  return d;
}

// Walks one optimal path back from the end, preferring the diagonal.
void TallyCharacters(std::string_view a, std::string_view b, EditTally& tally) {
  auto d = LevenshteinTable(a, b);
  size_t i = a.size();
  size_t j = b.size();
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 &&
        d[i][j] == d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)) {
      if (a[i - 1] != b[j - 1]) {
        auto from = static_cast<unsigned char>(a[i - 1]);
        auto to = static_cast<unsigned char>(b[j - 1]);
        ++tally.substitution[from * kAlphabet + to];
      }
      --i;
      --j;
    } else if (i > 0 && d[i][j] == d[i - 1][j] + 1) {
      ++tally.deletion[static_cast<unsigned char>(a[i - 1])];
      --i;
    } else {
      ++tally.insertion[static_cast<unsigned char>(b[j - 1])];
      --j;
    }
  }
}

}  // namespace

EditWeights::EditWeights()
    : substitution_(kAlphabet * kAlphabet, kDefaultCost),
      insertion_(kAlphabet, kDefaultCost),
      deletion_(kAlphabet, kDefaultCost) {}

double EditWeights::Substitution(char a, char b) const {
  if (a == b) return 0.0;
  return std::min(substitution_[Byte(a) * kAlphabet + Byte(b)],
                  substitution_[Byte(b) * kAlphabet + Byte(a)]);
}

double EditWeights::RawSubstitution(char from, char to) const {
  if (from == to) return 0.0;
  return substitution_[Byte(from) * kAlphabet + Byte(to)];
}

double EditWeights::Indel(char c) const {
  return std::min(insertion_[Byte(c)], deletion_[Byte(c)]);
}

void EditWeights::SetSubstitution(char from, char to, double cost) {
  CheckCost(cost);
  if (from == to) throw DataError("substitution of a character by itself");
  substitution_[Byte(from) * kAlphabet + Byte(to)] = cost;
}

void EditWeights::SetInsertion(char c, double cost) {
  CheckCost(cost);
  insertion_[Byte(c)] = cost;
}

void EditWeights::SetDeletion(char c, double cost) {
  CheckCost(cost);
  deletion_[Byte(c)] = cost;
}

double EditWeights::MinIndelCost() const {
  return std::min(*std::min_element(insertion_.begin(), insertion_.end()),
                  *std::min_element(deletion_.begin(), deletion_.end()));
}

double EditWeights::MinCost() const {
  return std::min(MinIndelCost(), *std::min_element(substitution_.begin(),
                                                    substitution_.end()));
}

bool EditWeights::IsUniform() const { return MinCost() == kDefaultCost; }

void EditWeights::Write(std::ostream& out) const {
  for (size_t from = 0; from < kAlphabet; ++from) {
    for (size_t to = 0; to < kAlphabet; ++to) {
      double cost = substitution_[from * kAlphabet + to];
      if (from == to || cost == kDefaultCost) continue;
      out << "sub\t" << EncodeChar(static_cast<char>(from)) << ' '
          << EncodeChar(static_cast<char>(to)) << '\t' << FormatDouble(cost)
          << '\n';
    }
  }
  for (size_t c = 0; c < kAlphabet; ++c) {
    if (insertion_[c] != kDefaultCost) {
      out << "ins\t" << EncodeChar(static_cast<char>(c)) << '\t'
          << FormatDouble(insertion_[c]) << '\n';
    }
  }
  for (size_t c = 0; c < kAlphabet; ++c) {
    if (deletion_[c] != kDefaultCost) {
      out << "del\t" << EncodeChar(static_cast<char>(c)) << '\t'
          << FormatDouble(deletion_[c]) << '\n';
    }
  }
}

EditWeights EditWeights::Read(std::istream& in) {
  EditWeights weights;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::string_view view = StripCarriageReturn(line);
    if (view.empty() || view.front() == '#') continue;
    try {
      auto fields = SplitTabs(view);
      if (fields.size() != 3) throw DataError("expected op<TAB>args<TAB>cost");
      double cost = ParseDouble(fields[2]);
      if (fields[0] == "sub") {
        size_t space = fields[1].find(' ');
        if (space == std::string_view::npos) {
          throw DataError("substitution needs two characters");
        }
        weights.SetSubstitution(DecodeChar(fields[1].substr(0, space)),
                                DecodeChar(fields[1].substr(space + 1)), cost);
      } else if (fields[0] == "ins") {
        weights.SetInsertion(DecodeChar(fields[1]), cost);
      } else if (fields[0] == "del") {
        weights.SetDeletion(DecodeChar(fields[1]), cost);
      } else {
        throw DataError("unknown operation '" + std::string(fields[0]) + "'");
      }
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  return weights;
}

double WeightedEditDistance(std::string_view a, std::string_view b,
                            const EditWeights& weights) {
  std::vector<double> prev(b.size() + 1);
  std::vector<double> curr(b.size() + 1);
  prev[0] = 0.0;
  for (size_t j = 0; j < b.size(); ++j) prev[j + 1] = prev[j] + weights.Indel(b[j]);
  for (size_t i = 0; i < a.size(); ++i) {
    double remove = weights.Indel(a[i]);
    curr[0] = prev[0] + remove;
    for (size_t j = 0; j < b.size(); ++j) {
      double deletion = prev[j + 1] + remove;
      double insertion = curr[j] + weights.Indel(b[j]);
      double substitution = prev[j] + weights.Substitution(a[i], b[j]);
      curr[j + 1] = std::min({deletion, insertion, substitution});
    }
    prev.swap(curr);
  }
  return prev[b.size()];
}

size_t LevenshteinDistance(std::string_view a, std::string_view b) {
  // Strip the common prefix.
  while (!a.empty() && !b.empty() && a.front() == b.front()) {
    a.remove_prefix(1);
    b.remove_prefix(1);
  }
  std::vector<size_t> prev(b.size() + 1);
  std::vector<size_t> curr(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (size_t i = 0; i < a.size(); ++i) {
    curr[0] = i + 1;
    for (size_t j = 0; j < b.size(); ++j) {
      size_t substitution = prev[j] + (a[i] == b[j] ? 0 : 1);
      curr[j + 1] = std::min({prev[j + 1] + 1, curr[j] + 1, substitution});
    }
    prev.swap(curr);
  }
  return prev[b.size()];
}

EditTally::EditTally()
    : substitution(kAlphabet * kAlphabet, 0),
      insertion(kAlphabet, 0),
      deletion(kAlphabet, 0) {}

size_t EditTally::MaxCount() const {
  return std::max({*std::max_element(substitution.begin(), substitution.end()),
                   *std::max_element(insertion.begin(), insertion.end()),
                   *std::max_element(deletion.begin(), deletion.end())});
}

EditTally TallyEdits(const AliasPairs& pairs) {
  EditTally tally;
  for (const auto& [first, second] : pairs.pairs) {
    std::vector<std::string> left = CanonicalWords(Lowercase(first));
    std::vector<std::string> right = CanonicalWords(Lowercase(second));

    // Greedy word alignment: cheapest pairs first, each word used once.
    std::vector<std::tuple<double, size_t, size_t>> candidates;
    for (size_t i = 0; i < left.size(); ++i) {
      for (size_t j = 0; j < right.size(); ++j) {
        double longest = static_cast<double>(
            std::max(left[i].size(), right[j].size()));
        double distance =
            static_cast<double>(LevenshteinDistance(left[i], right[j])) / longest;
        if (distance <= kMaxAlignedWordDistance) {
          candidates.emplace_back(distance, i, j);
        }
      }
    }
    std::sort(candidates.begin(), candidates.end());
    std::vector<bool> left_used(left.size(), false);
    std::vector<bool> right_used(right.size(), false);
    for (const auto& [distance, i, j] : candidates) {
      if (left_used[i] || right_used[j]) continue;
      left_used[i] = right_used[j] = true;
      TallyCharacters(left[i], right[j], tally);
    }
  }
  return tally;
}

EditWeights TrainEditWeights(const AliasPairs& pairs) {
  EditTally tally = TallyEdits(pairs);
  EditWeights weights;
  size_t max_count = tally.MaxCount();
  if (max_count == 0) return weights;
  auto cost = [&](size_t count) {
    return std::max(kMinLearnedCost,
                    1.0 - static_cast<double>(count) /
                              static_cast<double>(max_count + 1));
  };
  for (size_t from = 0; from < kAlphabet; ++from) {
    for (size_t to = 0; to < kAlphabet; ++to) {
      size_t count = tally.substitution[from * kAlphabet + to];
      if (count > 0) {
        weights.SetSubstitution(static_cast<char>(from), static_cast<char>(to),
                                cost(count));
      }
    }
    if (tally.insertion[from] > 0) {
      weights.SetInsertion(static_cast<char>(from), cost(tally.insertion[from]));
    }
    if (tally.deletion[from] > 0) {
      weights.SetDeletion(static_cast<char>(from), cost(tally.deletion[from]));
    }
  }
  return weights;
}

}  // namespace evcoref
