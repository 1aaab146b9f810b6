#include "ddix/codec.hpp"

#include <algorithm>
#include <array>
#include <map>

namespace ddix::codec {
namespace {

enum class Base { B, I, HB, HI, DB, DI, O };

constexpr std::array<std::string_view, 6> kBaseNames = {"B", "I", "H-B", "H-I", "D-B", "D-I"};

std::optional<Base> parse_base(std::string_view s) {
  for (std::size_t i = 0; i < kBaseNames.size(); ++i) {
    if (kBaseNames[i] == s) return static_cast<Base>(i);
  }
  if (s == "O") return Base::O;
  return std::nullopt;
}

bool is_d(Base b) { return b == Base::DB || b == Base::DI; }

struct Cell {
  Base base = Base::O;
  std::optional<DdiType> ddi;
};

std::vector<Cell> cells_of(const std::vector<int>& ids, const TagScheme& scheme) {
  std::vector<Cell> cells;
  cells.reserve(ids.size());
  for (int id : ids) {
    if (id < 0 || id >= scheme.size()) {
      throw Error("tag id " + std::to_string(id) + " outside the " +
                  std::string(to_string(scheme.variant())) + " alphabet");
    }
    auto [base, ddi] = split_fine_tag(scheme.tag(id));
    cells.push_back({*parse_base(base), ddi});
  }
  return cells;
}

std::string render(const Cell& c, Variant variant) {
  if (c.base == Base::O) return "O";
  std::string_view base = kBaseNames[static_cast<int>(c.base)];
  if (variant == Variant::BIOHD_DDI) return fine_tag(base, *c.ddi);
  return std::string(base);
}

// Tags for a sorted, de-duplicated mention set, without the round-trip check.
std::vector<Cell> encode_raw(int n, const std::vector<TaggedSpan>& mentions, Variant variant) {
  const int m = static_cast<int>(mentions.size());
  std::vector<int> count(n, 0);
  std::vector<int> owner(n, -1);  // first mention covering the token
  for (int i = 0; i < m; ++i) {
    for (int t : mentions[i].span.tokens()) {
      if (count[t]++ == 0) owner[t] = i;
    }
  }
  std::vector<bool> complex(m, false);
  for (int i = 0; i < m; ++i) {
    complex[i] = !mentions[i].span.is_contiguous();
    for (int j = 0; j < m && !complex[i]; ++j) {
      if (j != i && mentions[i].span.overlaps(mentions[j].span)) complex[i] = true;
    }
  }
  if (variant == Variant::BIO) {
    for (int i = 0; i < m; ++i) {
      if (complex[i]) {
        throw UnrepresentableError("BIO cannot encode overlapping or discontinuous mention " +
                                   mentions[i].span.to_string());
      }
    }
  }

  std::vector<Cell> cells(n);
  std::vector<bool> h_started(m, false);
  for (int t = 0; t < n; ++t) {
    if (count[t] == 0) continue;
    Cell& c = cells[t];
    const int i = owner[t];
    c.ddi = mentions[i].ddi;
    if (count[t] >= 2) {
      c.base = (t > 0 && count[t - 1] >= 2) ? Base::DI : Base::DB;
    } else if (complex[i]) {
      c.base = h_started[i] ? Base::HI : Base::HB;
      h_started[i] = true;
    } else {
      c.base = t == mentions[i].span.first() ? Base::B : Base::I;
    }
  }
  return cells;
}

struct Segment {
  int first = 0;
  std::vector<int> tokens;
  int last() const { return tokens.back(); }
};

DdiType majority(const std::vector<int>& tokens, const std::vector<Cell>& cells) {
  std::array<int, 3> votes{};
  for (int t : tokens) {
    if (cells[t].ddi) ++votes[static_cast<int>(*cells[t].ddi)];
  }
  int best = 0;
  for (int k = 1; k < 3; ++k) {
    if (votes[k] > votes[best]) best = k;
  }
  return static_cast<DdiType>(best);
}

std::vector<TaggedSpan> decode_raw(const std::vector<Cell>& cells, Variant variant) {
  const int n = static_cast<int>(cells.size());
  std::vector<Segment> bi, h, d;
  // Index of the H group each token belongs to, for continuation lookups.
  int open_bi = -1;
  int last_d_token = -1;
  for (int t = 0; t < n; ++t) {
    const Base b = cells[t].base;
    if (b == Base::B || (b == Base::I && (open_bi < 0 || bi[open_bi].last() != t - 1))) {
      bi.push_back({t, {t}});
      open_bi = static_cast<int>(bi.size()) - 1;
    } else if (b == Base::I) {
      bi[open_bi].tokens.push_back(t);
    } else if (b == Base::HB) {
      h.push_back({t, {t}});
    } else if (b == Base::HI) {
      // Continue the most recent H group unless a shared segment intervened.
      if (!h.empty() && last_d_token < h.back().last()) {
        h.back().tokens.push_back(t);
      } else {
        h.push_back({t, {t}});
      }
    } else if (b == Base::DB || (b == Base::DI && (t == 0 || !is_d(cells[t - 1].base)))) {
      d.push_back({t, {t}});
    } else if (b == Base::DI) {
      d.back().tokens.push_back(t);
    }
    if (is_d(b)) last_d_token = t;
  }

  // Starts of segments that end a D segment's run of following partners.
  std::vector<int> barriers;
  for (const auto& s : bi) barriers.push_back(s.first);
  for (const auto& s : d) barriers.push_back(s.first);
  std::sort(barriers.begin(), barriers.end());

  std::vector<bool> h_used(h.size(), false);
  std::vector<std::vector<int>> spans;
  std::vector<bool> h_following(h.size(), false);
  for (const auto& seg : d) {
    std::vector<int> partners;
    // Nearest preceding group, with no barrier in between.
    int best = -1;
    for (int g = 0; g < static_cast<int>(h.size()); ++g) {
      if (h[g].last() < seg.first && !h_following[g]) {
        if (best < 0 || h[g].last() > h[best].last()) best = g;
      }
    }
    if (best >= 0) {
      bool blocked = false;
      for (int bpos : barriers) {
        if (bpos > h[best].last() && bpos < seg.first) blocked = true;
      }
      if (!blocked) partners.push_back(best);
    }
    // All following groups until the next barrier.
    int limit = n;
    for (int bpos : barriers) {
      if (bpos > seg.last()) {
        limit = bpos;
        break;
      }
    }
    for (int g = 0; g < static_cast<int>(h.size()); ++g) {
      if (h[g].first > seg.last() && h[g].first < limit) {
        partners.push_back(g);
        h_following[g] = true;
      }
    }
    if (partners.empty()) {
      spans.push_back(seg.tokens);
    }
    for (int g : partners) {
      h_used[g] = true;
      std::vector<int> toks = seg.tokens;
      toks.insert(toks.end(), h[g].tokens.begin(), h[g].tokens.end());
      spans.push_back(std::move(toks));
    }
  }
  for (std::size_t g = 0; g < h.size(); ++g) {
    if (!h_used[g]) spans.push_back(h[g].tokens);
  }
  for (const auto& s : bi) spans.push_back(s.tokens);

  std::vector<TaggedSpan> out;
  out.reserve(spans.size());
  for (auto& toks : spans) {
    std::optional<DdiType> ddi;
    if (variant == Variant::BIOHD_DDI) ddi = majority(toks, cells);
    out.push_back({Span::from_tokens(std::move(toks)), ddi});
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool representable(int n, const std::vector<TaggedSpan>& mentions, Variant variant) {
  try {
    return decode_raw(encode_raw(n, mentions, variant), variant) == mentions;
  } catch (const UnrepresentableError&) {
    return false;
  }
}

// Drops mentions (latest first) until the set is representable.
std::vector<TaggedSpan> make_representable(int n, std::vector<TaggedSpan> mentions,
                                           Variant variant) {
  while (!representable(n, mentions, variant)) {
    bool fixed = false;
    for (int i = static_cast<int>(mentions.size()) - 1; i >= 0 && !fixed; --i) {
      auto candidate = mentions;
      candidate.erase(candidate.begin() + i);
      if (representable(n, candidate, variant)) {
        mentions = std::move(candidate);
        fixed = true;
      }
    }
    if (!fixed) mentions.pop_back();
  }
  return mentions;
}

std::vector<TaggedSpan> normalize_input(int n, std::vector<TaggedSpan> mentions,
                                        const TagScheme& scheme) {
  for (auto& m : mentions) {
    if (auto why = check_span(m.span, n)) throw Error("cannot encode mention: " + *why);
    if (scheme.variant() == Variant::BIOHD_DDI) {
      if (!m.ddi) throw Error("BIOHD_DDI encoding needs a DDI type on every mention");
    } else {
      m.ddi.reset();
    }
  }
  std::sort(mentions.begin(), mentions.end());
  mentions.erase(std::unique(mentions.begin(), mentions.end()), mentions.end());
  return mentions;
}

TagSequence render_all(const std::vector<Cell>& cells, Variant variant) {
  TagSequence tags;
  tags.reserve(cells.size());
  for (const auto& c : cells) tags.push_back(render(c, variant));
  return tags;
}

}  // namespace

std::string_view to_string(Variant variant) {
  switch (variant) {
    case Variant::BIO: return "BIO";
    case Variant::BIOHD: return "BIOHD";
    case Variant::BIOHD_DDI: return "BIOHD_DDI";
  }
  return "?";
}

std::optional<Variant> parse_variant(std::string_view text) {
  for (Variant v : {Variant::BIO, Variant::BIOHD, Variant::BIOHD_DDI}) {
    if (to_string(v) == text) return v;
  }
  return std::nullopt;
}

TagScheme::TagScheme(Variant variant) : variant_(variant) {
  switch (variant) {
    case Variant::BIO:
      alphabet_ = {"B", "I", "O"};
      break;
    case Variant::BIOHD:
      alphabet_.assign(kBaseNames.begin(), kBaseNames.end());
      alphabet_.push_back("O");
      break;
    case Variant::BIOHD_DDI:
      for (auto base : kBaseNames) {
        for (DdiType t : kAllDdiTypes) alphabet_.push_back(fine_tag(base, t));
      }
      alphabet_.push_back("O");
      break;
  }
}

int TagScheme::index_of(std::string_view tag) const {
  for (int i = 0; i < size(); ++i) {
    if (alphabet_[i] == tag) return i;
  }
  return -1;
}

std::vector<int> TagScheme::to_ids(const std::vector<std::string>& tags) const {
  std::vector<int> ids;
  ids.reserve(tags.size());
  for (const auto& t : tags) {
    int id = index_of(t);
    if (id < 0) {
      throw Error("tag '" + t + "' is not in the " + std::string(to_string(variant_)) +
                  " alphabet");
    }
    ids.push_back(id);
  }
  return ids;
}

std::vector<std::string> TagScheme::to_tags(const std::vector<int>& ids) const {
  std::vector<std::string> tags;
  tags.reserve(ids.size());
  for (int id : ids) tags.push_back(tag(id));
  return tags;
}

std::string fine_tag(std::string_view base, DdiType ddi) {
  auto b = parse_base(base);
  if (!b || *b == Base::O) throw Error("cannot type tag '" + std::string(base) + "'");
  std::string out(base);
  out += '-';
  out += to_string(ddi);
  return out;
}

std::pair<std::string, std::optional<DdiType>> split_fine_tag(std::string_view tag) {
  if (parse_base(tag)) return {std::string(tag), std::nullopt};
  std::size_t dash = tag.rfind('-');
  if (dash != std::string_view::npos) {
    auto base = parse_base(tag.substr(0, dash));
    auto ddi = parse_ddi_type(tag.substr(dash + 1));
    if (base && *base != Base::O && ddi) return {std::string(tag.substr(0, dash)), ddi};
  }
  throw Error("malformed tag '" + std::string(tag) + "'");
}

TagSequence encode(int token_count, std::vector<TaggedSpan> mentions, const TagScheme& scheme) {
  mentions = normalize_input(token_count, std::move(mentions), scheme);
  auto cells = encode_raw(token_count, mentions, scheme.variant());
  if (decode_raw(cells, scheme.variant()) != mentions) {
    std::string which;
    for (const auto& m : mentions) which += " " + m.span.to_string();
    throw UnrepresentableError("mention set {" + which + " } has no invertible " +
                               std::string(to_string(scheme.variant())) + " encoding");
  }
  return render_all(cells, scheme.variant());
}

TagSequence encode_lenient(int token_count, std::vector<TaggedSpan> mentions,
                           const TagScheme& scheme, std::vector<TaggedSpan>* dropped) {
  mentions = normalize_input(token_count, std::move(mentions), scheme);
  auto kept = make_representable(token_count, mentions, scheme.variant());
  if (dropped) {
    std::set_difference(mentions.begin(), mentions.end(), kept.begin(), kept.end(),
                        std::back_inserter(*dropped));
  }
  return render_all(encode_raw(token_count, kept, scheme.variant()), scheme.variant());
}

std::vector<TaggedSpan> decode_ids(const std::vector<int>& ids, const TagScheme& scheme) {
  auto cells = cells_of(ids, scheme);
  return make_representable(static_cast<int>(cells.size()), decode_raw(cells, scheme.variant()),
                            scheme.variant());
}

std::vector<TaggedSpan> decode(const TagSequence& tags, const TagScheme& scheme) {
  return decode_ids(scheme.to_ids(tags), scheme);
}

}  // namespace ddix::codec
