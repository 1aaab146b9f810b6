#pragma once

#include <random>
#include <vector>

#include "ddix/codec.hpp"

namespace ddix::testing {

struct MentionCase {
  int token_count = 0;
  std::vector<codec::TaggedSpan> mentions;  // sorted
};

// Builds mention sets out of blocks whose shapes are unambiguous for the
// H/D tag family: plain spans, lone gapped spans, a shared head with two or
// three tails, and head-shared-tail pairs. A shared block is separated from
// any other gapped or shared block by a plain span.
MentionCase random_mention_case(std::mt19937_64& rng, int max_tokens, int max_mentions,
                                codec::Variant variant);

}  // namespace ddix::testing
