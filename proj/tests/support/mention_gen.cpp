#include "mention_gen.hpp"

#include <algorithm>

namespace ddix::testing {

namespace {

enum class Block { Plain, Gapped, SharedHead, HeadSharedTail };

int below(std::mt19937_64& rng, int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); }

std::vector<int> range(int first, int count) {
  std::vector<int> out;
  for (int i = 0; i < count; ++i) out.push_back(first + i);
  return out;
}

std::vector<int> concat(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

MentionCase random_mention_case(std::mt19937_64& rng, int max_tokens, int max_mentions,
                                codec::Variant variant) {
  MentionCase c;
  c.token_count = 1 + below(rng, max_tokens);
  const int n = c.token_count;
  int pos = below(rng, 3);  // leading O tokens
  // What the previous block was, plain spans resetting it. A shared block
  // pairs with any H group before it up to the last plain span, and claims
  // every H group after it up to the next one.
  enum class Last { None, Gapped, Shared } last = Last::None;
  const bool complex_ok = variant != codec::Variant::BIO;

  while (static_cast<int>(c.mentions.size()) < max_mentions && pos < n) {
    const int budget = max_mentions - static_cast<int>(c.mentions.size());
    std::vector<Block> options{Block::Plain};
    if (complex_ok && last != Last::Shared) options.push_back(Block::Gapped);
    if (complex_ok && last == Last::None && budget >= 2) {
      options.push_back(Block::SharedHead);
      options.push_back(Block::HeadSharedTail);
    }
    const Block kind = options[below(rng, static_cast<int>(options.size()))];
    const int room = n - pos;
    std::optional<DdiType> ddi;
    if (variant == codec::Variant::BIOHD_DDI) ddi = kAllDdiTypes[below(rng, 3)];

    std::vector<std::vector<int>> spans;
    int used = 0;
    switch (kind) {
      case Block::Plain: {
        const int len = 1 + below(rng, std::min(room, 3));
        spans.push_back(range(pos, len));
        used = len;
        break;
      }
      case Block::Gapped: {
        const int a = 1 + below(rng, 2), gap = 1 + below(rng, 2), b = 1 + below(rng, 2);
        if (a + gap + b > room) continue;
        spans.push_back(concat(range(pos, a), range(pos + a + gap, b)));
        used = a + gap + b;
        break;
      }
      case Block::SharedHead: {
        const int tails = std::min(budget, 2 + below(rng, 2));
        const int head = 1 + below(rng, 2);
        std::vector<int> lens, gaps;
        int total = head;
        for (int k = 0; k < tails; ++k) {
          gaps.push_back(below(rng, 2));
          lens.push_back(1 + below(rng, 2));
          total += gaps.back() + lens.back();
        }
        if (total > room) continue;
        const auto shared = range(pos, head);
        int at = pos + head;
        for (int k = 0; k < tails; ++k) {
          at += gaps[k];
          spans.push_back(concat(shared, range(at, lens[k])));
          at += lens[k];
        }
        used = total;
        break;
      }
      case Block::HeadSharedTail: {
        const int h = 1 + below(rng, 2), gap1 = below(rng, 2), s = 1 + below(rng, 2),
                  gap2 = below(rng, 2), t = 1 + below(rng, 2);
        if (h + gap1 + s + gap2 + t > room) continue;
        const auto shared = range(pos + h + gap1, s);
        spans.push_back(concat(range(pos, h), shared));
        spans.push_back(concat(shared, range(pos + h + gap1 + s + gap2, t)));
        used = h + gap1 + s + gap2 + t;
        break;
      }
    }
    for (auto& toks : spans) c.mentions.push_back({Span::from_tokens(std::move(toks)), ddi});
    switch (kind) {
      case Block::Plain: last = Last::None; break;
      case Block::Gapped: last = Last::Gapped; break;
      default: last = Last::Shared; break;
    }
    pos += used + below(rng, 3);
  }
  std::sort(c.mentions.begin(), c.mentions.end());
  return c;
}

}  // namespace ddix::testing
