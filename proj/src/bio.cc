#include "nestex/bio.h"

#include <algorithm>

namespace nestex {

BioError::BioError(std::size_t position, const std::string& what)
    : std::runtime_error("tag " + std::to_string(position) + ": " + what),
      position_(position) {}

TagSequence bio_encode(const std::vector<LabeledSpan>& spans, int n,
                       bool strict) {
  TagSequence tags(static_cast<std::size_t>(std::max(n, 0)), "O");
  std::vector<bool> covered(tags.size(), false);
  for (const auto& ls : spans) {
    if (ls.span.start < 0 || ls.span.start >= ls.span.end || ls.span.end > n) {
      throw BioError(static_cast<std::size_t>(std::max(ls.span.start, 0)),
                     "span out of range");
    }
    bool clash = false;
    for (int j = ls.span.start; j < ls.span.end; ++j) clash = clash || covered[j];
    if (clash) {
      if (strict) {
        throw BioError(static_cast<std::size_t>(ls.span.start),
                       "overlapping spans cannot be BIO-encoded");
      }
      continue;
    }
    for (int j = ls.span.start; j < ls.span.end; ++j) {
      covered[j] = true;
      tags[j] = (j == ls.span.start ? "B-" : "I-") + ls.label;
    }
  }
  return tags;
}

std::vector<LabeledSpan> bio_decode(const TagSequence& tags, bool strict) {
  std::vector<LabeledSpan> out;
  bool open = false;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const std::string& tag = tags[i];
    if (tag == "O") {
      open = false;
      continue;
    }
    if (tag.size() < 3 || tag[1] != '-' || (tag[0] != 'B' && tag[0] != 'I')) {
      throw BioError(i, "malformed tag '" + tag + "'");
    }
    const std::string label = tag.substr(2);
    const int pos = static_cast<int>(i);
    if (tag[0] == 'I' && open && out.back().label == label) {
      out.back().span.end = pos + 1;
      continue;
    }
    if (tag[0] == 'I' && strict) {
      throw BioError(i, "orphan '" + tag + "' without a preceding B-" + label);
    }
    out.push_back(LabeledSpan{Span{pos, pos + 1}, label});
    open = true;
  }
  return out;
}

TagSet::TagSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  index_.emplace("O", kOutside);
  for (std::size_t l = 0; l < labels_.size(); ++l) {
    index_.emplace("B-" + labels_[l], begin_tag(l));
    index_.emplace("I-" + labels_[l], inside_tag(l));
  }
}

std::string TagSet::name(int tag) const {
  if (tag == kOutside) return "O";
  return (is_begin(tag) ? "B-" : "I-") + labels_.at(label_of(tag));
}

int TagSet::index(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

TagSequence TagSet::names(const std::vector<int>& tags) const {
  TagSequence out;
  out.reserve(tags.size());
  for (int t : tags) out.push_back(name(t));
  return out;
}

std::vector<int> TagSet::encode(const std::vector<IndexedSpan>& spans, int n) const {
  std::vector<int> tags(static_cast<std::size_t>(n), kOutside);
  for (const auto& s : spans) {
    for (int j = s.span.start; j < s.span.end; ++j) {
      if (tags[j] != kOutside) {
        throw BioError(static_cast<std::size_t>(j),
                       "overlapping spans cannot be BIO-encoded");
      }
      tags[j] = j == s.span.start ? begin_tag(s.label) : inside_tag(s.label);
    }
  }
  return tags;
}

std::vector<TagSet::IndexedSpan> TagSet::decode(const std::vector<int>& tags) const {
  std::vector<IndexedSpan> out;
  bool open = false;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const int tag = tags[i];
    const int pos = static_cast<int>(i);
    if (tag == kOutside) {
      open = false;
    } else if (is_inside(tag) && open && out.back().label == label_of(tag)) {
      out.back().span.end = pos + 1;
    } else {
      out.push_back(IndexedSpan{Span{pos, pos + 1}, label_of(tag)});
      open = true;
    }
  }
  return out;
}

}  // namespace nestex
