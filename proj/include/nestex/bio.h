#ifndef NESTEX_BIO_H_
#define NESTEX_BIO_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "nestex/corpus.h"

namespace nestex {

using TagSequence = std::vector<std::string>;

struct LabeledSpan {
  Span span;
  std::string label;
  friend auto operator<=>(const LabeledSpan&, const LabeledSpan&) = default;
};

class BioError : public std::runtime_error {
 public:
  BioError(std::size_t position, const std::string& what);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Overlapping spans throw in strict mode; in lenient mode a span that
// overlaps an earlier one is dropped.
TagSequence bio_encode(const std::vector<LabeledSpan>& spans, int n,
                       bool strict = true);

// Lenient mode opens a new span on an I-tag that does not continue a span of
// the same label; strict mode throws BioError at that position.
std::vector<LabeledSpan> bio_decode(const TagSequence& tags, bool strict = false);

// Integer tag inventory used by the CRF layers: tag 0 is O, label l maps to
// B = 1 + 2l and I = 2 + 2l.
class TagSet {
 public:
  static constexpr int kOutside = 0;

  explicit TagSet(std::vector<std::string> labels);

  std::size_t size() const { return 1 + 2 * labels_.size(); }
  std::size_t num_labels() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }

  int begin_tag(std::size_t label) const { return 1 + 2 * static_cast<int>(label); }
  int inside_tag(std::size_t label) const { return 2 + 2 * static_cast<int>(label); }
  bool is_begin(int tag) const { return tag > 0 && tag % 2 == 1; }
  bool is_inside(int tag) const { return tag > 0 && tag % 2 == 0; }
  // Label index of a B or I tag.
  std::size_t label_of(int tag) const { return static_cast<std::size_t>((tag - 1) / 2); }

  std::string name(int tag) const;
  // -1 for unknown names.
  int index(const std::string& name) const;

  TagSequence names(const std::vector<int>& tags) const;

  struct IndexedSpan {
    Span span;
    std::size_t label;
    friend bool operator==(const IndexedSpan&, const IndexedSpan&) = default;
  };
  std::vector<int> encode(const std::vector<IndexedSpan>& spans, int n) const;
  // Lenient decoding of an integer tag path.
  std::vector<IndexedSpan> decode(const std::vector<int>& tags) const;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace nestex

#endif  // NESTEX_BIO_H_
