#ifndef NESTEX_MODEL_H_
#define NESTEX_MODEL_H_

#include <cstddef>
#include <utility>
#include <vector>

#include "nestex/bio.h"
#include "nestex/config.h"
#include "nestex/corpus.h"
#include "nestex/crf.h"
#include "nestex/decoder.h"
#include "nestex/encoder.h"
#include "nestex/mlp.h"
#include "nestex/params.h"

namespace nestex {

// Role scores for ordered (left, right) candidate pairs. Column 0 is NONE,
// column r + 1 is role r.
struct PairScores {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  Tensor scores;

  std::size_t size() const { return pairs.size(); }
};

struct LossBreakdown {
  double trigger_crf = 0.0;      // -log p(z_T | H)
  double trigger_type = 0.0;     // type cross-entropy
  double entity_crf = 0.0;       // -log p(z_E | H)
  double trigger_entity = 0.0;   // trigger-entity role cross-entropy
  double trigger_trigger = 0.0;  // trigger-trigger (pivot) cross-entropy

  double total() const {
    return trigger_crf + trigger_type + entity_crf + trigger_entity + trigger_trigger;
  }
};

// Arithmetic mean of the representation rows covered by each span.
Tensor span_representations(const Tensor& repr, const std::vector<Span>& spans);

// Trigger tagger + type scorer, entity tagger, trigger-entity role classifier,
// trigger-trigger pivot classifier, and the structure decoder on top.
//
// Parameters: enc.* (encoder), trig.tag / trig.crf / trig.type, ent.tag /
// ent.crf, pair.te, and pair.tt unless ablate_per is set. With ablate_per the
// trigger-trigger pairs are classified by pair.te instead.
class EventModel {
 public:
  EventModel(RunConfig config, LabelVocab labels, TokenVocab tokens);

  const RunConfig& config() const { return config_; }
  const LabelVocab& labels() const { return labels_; }
  const Encoder& encoder() const { return encoder_; }
  const TagSet& trigger_tags() const { return trigger_tags_; }
  const TagSet& entity_tags() const { return entity_tags_; }
  ModelParams& params() { return params_; }
  const ModelParams& params() const { return params_; }

  Tensor encode(const std::vector<std::string>& tokens) const;
  CrfLayer trigger_crf() const;
  CrfLayer entity_crf() const;

  Tensor trigger_emissions(const Tensor& repr) const;
  Tensor entity_emissions(const Tensor& repr) const;

  // Constrained Viterbi over typed trigger BIO tags; span labels index event types.
  std::vector<TagSet::IndexedSpan> tag_triggers(const Tensor& repr) const;
  // Entity spans; labels index entity types in typed mode and are 0 otherwise.
  std::vector<TagSet::IndexedSpan> tag_entities(const Tensor& repr) const;
  // The decoding half of the two taggers, given emission scores [n x tags].
  std::vector<TagSet::IndexedSpan> decode_trigger_emissions(const Tensor& emissions) const;
  std::vector<TagSet::IndexedSpan> decode_entity_emissions(const Tensor& emissions) const;

  // [triggers x event types] logits.
  Tensor score_trigger_types(const Tensor& trigger_reps) const;
  // Every (trigger, entity) pair, input [t; e].
  PairScores score_trigger_entity_pairs(const Tensor& trigger_reps,
                                        const Tensor& entity_reps) const;
  // Every ordered (outer, inner) trigger pair with outer != inner, input
  // [t_outer; t_inner].
  PairScores score_trigger_trigger_pairs(const Tensor& trigger_reps) const;

  // Joint loss on gold spans. With accumulate_grad the gradients are added to
  // params(); with train set, dropout draws from rng.
  LossBreakdown joint_loss(const Sentence& sentence, bool train, Rng* rng,
                           bool accumulate_grad);

  // Builds the decoder problem for a sentence's predicted mentions.
  DecoderInput decoder_input(const Tensor& repr,
                             const std::vector<TagSet::IndexedSpan>& triggers,
                             const std::vector<TagSet::IndexedSpan>& entities) const;

  Sentence predict(const Sentence& input) const;

 private:
  double pair_head_loss(const Mlp& head, const Tensor& left, const Tensor& right,
                        const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                        const std::vector<std::size_t>& gold, bool train, Rng* rng,
                        bool accumulate_grad, Tensor* d_left, Tensor* d_right);
  PairScores score_pairs(const Mlp& head, const Tensor& left, const Tensor& right,
                         std::vector<std::pair<std::size_t, std::size_t>> pairs) const;

  RunConfig config_;
  LabelVocab labels_;
  TagSet trigger_tags_;
  TagSet entity_tags_;
  TransitionMask trigger_mask_;
  TransitionMask entity_mask_;
  Encoder encoder_;
  Mlp trigger_tagger_;
  Mlp type_scorer_;
  Mlp entity_tagger_;
  Mlp trigger_entity_head_;
  Mlp trigger_trigger_head_;
  ModelParams params_;
};

}  // namespace nestex

#endif  // NESTEX_MODEL_H_
