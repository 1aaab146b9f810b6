#include <array>
#include <random>
#include <string>
#include <vector>

#include "ddix/corpus.hpp"

namespace ddix::corpus {
namespace {

struct LabelEntry {
  const char* name;
  std::vector<const char*> aliases;
};

const std::vector<LabelEntry>& label_pool() {
  static const std::vector<LabelEntry> pool = {
      {"digoxin", {"Lanoxin"}},       {"warfarin", {"Coumadin"}},
      {"aspirin", {}},                {"diazepam", {"Valium"}},
      {"metformin", {"Glucophage"}},  {"simvastatin", {"Zocor"}},
      {"clopidogrel", {"Plavix"}},    {"lisinopril", {"Zestril"}},
      {"sertraline", {"Zoloft"}},     {"atorvastatin", {"Lipitor"}},
      {"tacrolimus", {"Prograf"}},    {"midazolam", {}},
      {"levothyroxine", {"Synthroid"}}, {"quetiapine", {"Seroquel"}},
  };
  return pool;
}

const std::vector<const char*>& drug_pool() {
  static const std::vector<const char*> pool = {
      "ketoconazole",   "rifampin",         "itraconazole",       "clarithromycin",
      "erythromycin",   "fluconazole",      "carbamazepine",      "phenytoin",
      "cimetidine",     "omeprazole",       "verapamil",          "diltiazem",
      "amiodarone",     "quinidine",        "cyclosporine",       "grapefruit juice",
      "strong CYP3A4 inhibitors",           "CYP3A4 inducers",    "alcohol",
      "valproic acid",  "lithium",          "NSAIDs",             "MAO inhibitors",
      "antacids",       "cholestyramine",   "probenecid",         "ritonavir",
      "nefazodone",     "gemfibrozil",      "rifabutin",          "efavirenz",
      "fluoxetine",     "paroxetine",       "colesevelam",        "barbiturates",
      "tramadol",       "opioids",          "theophylline",       "sucralfate",
      "ciprofloxacin",
  };
  return pool;
}

const std::array<const char*, 10> kParamPhrases = {
    "exposure", "plasma concentrations", "serum levels", "concentrations", "levels",
    "blood levels", "AUC", "Cmax", "half-life", "Tmax"};

struct TrendForms {
  const char* third;
  const char* past;
  const char* base;
};

const std::array<TrendForms, 3> kIncrease = {{{"increases", "increased", "increase"},
                                              {"elevates", "elevated", "elevate"},
                                              {"raises", "raised", "raise"}}};
const std::array<TrendForms, 3> kDecrease = {{{"decreases", "decreased", "decrease"},
                                              {"reduces", "reduced", "reduce"},
                                              {"lowers", "lowered", "lower"}}};

PkParameter param_of(std::string_view phrase) {
  if (phrase == "AUC") return PkParameter::Auc;
  if (phrase == "Cmax") return PkParameter::Cmax;
  if (phrase == "half-life") return PkParameter::HalfLife;
  if (phrase == "Tmax") return PkParameter::Tmax;
  return PkParameter::Level;
}

const std::array<const char*, 4> kPdVerbs = {"potentiate", "enhance", "antagonize", "diminish"};
const std::array<const char*, 5> kPdEffects = {"sedative effects", "hypotensive effect",
                                               "anticoagulant effect", "CNS depressant effects",
                                               "therapeutic effect"};
const std::array<const char*, 5> kRiskEffects = {"bleeding", "serotonin syndrome", "myopathy",
                                                 "hypoglycemia", "lactic acidosis"};

struct SharedPair {
  const char* verb;
  const char* first;
  const char* second;
};
const std::array<SharedPair, 3> kSharedPairs = {{{"increase", "the blood pressure", "heart rate"},
                                                 {"cause", "severe hypotension", "syncope"},
                                                 {"prolong", "the QT interval", "PR interval"}}};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // Raw engine output keeps the stream identical across standard libraries.
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  bool chance(int percent) { return below(100) < static_cast<std::size_t>(percent); }
  template <class C>
  const auto& pick(const C& c) {
    return c[below(c.size())];
  }

 private:
  std::mt19937_64 engine_;
};

struct PlannedMention {
  MentionKind kind;
  Span span;
  std::optional<DdiType> ddi;
};

struct PlannedInteraction {
  DdiType type;
  int precipitant;
  int trigger;
  std::optional<int> specific;
  std::optional<PkSubtype> subtype;
};

class SentenceBuilder {
 public:
  Span add(std::string_view piece) {
    std::string text(piece);
    if (text_.empty() && !text.empty() && text[0] >= 'a' && text[0] <= 'z') {
      text[0] = static_cast<char>(text[0] - 'a' + 'A');
    }
    int count = static_cast<int>(tokenize(text).size());
    if (!text_.empty()) text_ += ' ';
    text_ += text;
    Span span = Span::contiguous(next_, next_ + count - 1);
    next_ += count;
    return span;
  }
  void end(char punct = '.') {
    text_ += ' ';
    text_ += punct;
    ++next_;
  }
  int add_mention(MentionKind kind, Span span, std::optional<DdiType> ddi = std::nullopt) {
    mentions.push_back({kind, std::move(span), ddi});
    return static_cast<int>(mentions.size()) - 1;
  }
  const std::string& text() const { return text_; }

  std::vector<PlannedMention> mentions;
  std::vector<PlannedInteraction> interactions;

 private:
  std::string text_;
  int next_ = 0;
};

Span join(const Span& a, const Span& b) {
  auto t = a.tokens();
  auto u = b.tokens();
  t.insert(t.end(), u.begin(), u.end());
  return Span::from_tokens(std::move(t));
}

class DocGenerator {
 public:
  DocGenerator(Rng& rng, const LabelEntry& label) : rng_(rng), label_(label) {}

  std::string label_name() {
    std::string name = label_.name;
    if (!label_.aliases.empty() && rng_.chance(35)) name = rng_.pick(label_.aliases);
    if (rng_.chance(10)) {
      for (char& c : name) {
        if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
      }
    }
    return name;
  }

  std::string drug() {
    std::string name = rng_.pick(drug_pool());
    int style = static_cast<int>(rng_.below(100));
    if (style < 15) {
      for (char& c : name) {
        if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
      }
    } else if (style < 25 && name[0] >= 'a' && name[0] <= 'z') {
      name[0] = static_cast<char>(name[0] - 'a' + 'A');
    }
    return name;
  }

  std::pair<std::string, std::string> two_drugs() {
    std::string a = drug();
    std::string b = drug();
    while (normalize_name(b) == normalize_name(a)) b = drug();
    return {a, b};
  }

  const TrendForms& trend(Trend& out) {
    out = rng_.chance(50) ? Trend::Increased : Trend::Decreased;
    return out == Trend::Increased ? rng_.pick(kIncrease) : rng_.pick(kDecrease);
  }

  SentenceBuilder sentence() {
    int roll = static_cast<int>(rng_.below(100));
    if (roll < 30) return pk_sentence();
    if (roll < 50) return pd_sentence();
    if (roll < 68) return un_sentence();
    return negative_sentence();
  }

 private:
  SentenceBuilder pk_sentence() {
    SentenceBuilder b;
    Trend tr;
    const TrendForms& forms = trend(tr);
    std::string param = rng_.pick(kParamPhrases);
    PkParameter pp = param_of(param);
    switch (rng_.below(5)) {
      case 0: {  // P decreases L exposure.
        Span p = b.add(drug());
        Span t1 = b.add(forms.third);
        b.add(label_name());
        Span t2 = b.add(param);
        b.end();
        int pi = b.add_mention(MentionKind::Precipitant, p);
        int ti = b.add_mention(MentionKind::Trigger, join(t1, t2), DdiType::PK);
        b.interactions.push_back(
            {DdiType::PK, pi, ti, std::nullopt, PkSubtype{tr, pp, PkObject::Drug}});
        break;
      }
      case 1: {  // Plasma concentrations of L increased when given with P.
        Span t1 = b.add(param);
        b.add("of");
        b.add(label_name());
        Span t2 = b.add(forms.past);
        b.add(rng_.chance(50) ? "when given with" : "following coadministration with");
        Span p = b.add(drug());
        b.end();
        int pi = b.add_mention(MentionKind::Precipitant, p);
        int ti = b.add_mention(MentionKind::Trigger, join(t1, t2), DdiType::PK);
        b.interactions.push_back(
            {DdiType::PK, pi, ti, std::nullopt, PkSubtype{tr, pp, PkObject::Drug}});
        break;
      }
      case 2: {  // L may increase P levels.
        b.add(label_name());
        b.add(rng_.chance(50) ? "may" : "can");
        Span t1 = b.add(forms.base);
        Span p = b.add(drug());
        Span t2 = b.add(param);
        b.end();
        int pi = b.add_mention(MentionKind::Precipitant, p);
        int ti = b.add_mention(MentionKind::Trigger, join(t1, t2), DdiType::PK);
        b.interactions.push_back(
            {DdiType::PK, pi, ti, std::nullopt, PkSubtype{tr, pp, PkObject::ConcomitantDrug}});
        break;
      }
      case 3: {  // Coadministration with P increased Cmax.
        b.add(rng_.chance(50) ? "coadministration with" : "concomitant administration of");
        Span p = b.add(drug());
        Span t = b.add(std::string(forms.past) + " " + param);
        b.end();
        int pi = b.add_mention(MentionKind::Precipitant, p);
        int ti = b.add_mention(MentionKind::Trigger, t, DdiType::PK);
        b.interactions.push_back(
            {DdiType::PK, pi, ti, std::nullopt, PkSubtype{tr, pp, PkObject::ConcomitantDrug}});
        break;
      }
      default: {  // P1 and P2 reduce L exposure.
        auto [d1, d2] = two_drugs();
        Span p1 = b.add(d1);
        b.add("and");
        Span p2 = b.add(d2);
        Span t1 = b.add(forms.base);
        b.add(label_name());
        Span t2 = b.add(param);
        b.end();
        int pi1 = b.add_mention(MentionKind::Precipitant, p1);
        int pi2 = b.add_mention(MentionKind::Precipitant, p2);
        int ti = b.add_mention(MentionKind::Trigger, join(t1, t2), DdiType::PK);
        PkSubtype st{tr, pp, PkObject::Drug};
        b.interactions.push_back({DdiType::PK, pi1, ti, std::nullopt, st});
        b.interactions.push_back({DdiType::PK, pi2, ti, std::nullopt, st});
        break;
      }
    }
    return b;
  }

  SentenceBuilder pd_sentence() {
    SentenceBuilder b;
    switch (rng_.below(3)) {
      case 0: {  // P may potentiate the sedative effects of L.
        Span p = b.add(drug());
        b.add("may");
        Span t = b.add(rng_.pick(kPdVerbs));
        b.add("the");
        Span s = b.add(rng_.pick(kPdEffects));
        b.add("of");
        b.add(label_name());
        b.end();
        int pi = b.add_mention(MentionKind::Precipitant, p);
        int ti = b.add_mention(MentionKind::Trigger, t, DdiType::PD);
        int si = b.add_mention(MentionKind::SpecificInteraction, s);
        b.interactions.push_back({DdiType::PD, pi, ti, si, std::nullopt});
        break;
      }
      case 1: {  // Concomitant use of L and P may increase the blood pressure and heart rate.
        const SharedPair& pair = rng_.pick(kSharedPairs);
        Span t = b.add("concomitant use");
        b.add("of");
        if (rng_.chance(70)) {
          b.add(label_name());
          b.add("and");
        }
        Span p = b.add(drug());
        b.add("may");
        Span verb = b.add(pair.verb);
        Span first = b.add(pair.first);
        b.add("and");
        Span second = b.add(pair.second);
        b.end();
        int pi = b.add_mention(MentionKind::Precipitant, p);
        int ti = b.add_mention(MentionKind::Trigger, t, DdiType::PD);
        int s1 = b.add_mention(MentionKind::SpecificInteraction, join(verb, first));
        int s2 = b.add_mention(MentionKind::SpecificInteraction, join(verb, second));
        b.interactions.push_back({DdiType::PD, pi, ti, s1, std::nullopt});
        b.interactions.push_back({DdiType::PD, pi, ti, s2, std::nullopt});
        break;
      }
      default: {  // P may increase the risk of bleeding.
        Span p = b.add(drug());
        b.add("may");
        Span t = b.add("increase the risk");
        b.add("of");
        Span s = b.add(rng_.pick(kRiskEffects));
        b.end();
        int pi = b.add_mention(MentionKind::Precipitant, p);
        int ti = b.add_mention(MentionKind::Trigger, t, DdiType::PD);
        int si = b.add_mention(MentionKind::SpecificInteraction, s);
        b.interactions.push_back({DdiType::PD, pi, ti, si, std::nullopt});
        break;
      }
    }
    return b;
  }

  SentenceBuilder un_sentence() {
    SentenceBuilder b;
    switch (rng_.below(4)) {
      case 0: {  // Avoid concomitant use of L with P1 or P2.
        Span t = b.add("avoid concomitant use");
        b.add("of");
        b.add(label_name());
        b.add("with");
        int ti = b.add_mention(MentionKind::Trigger, t, DdiType::UN);
        if (rng_.chance(40)) {
          auto [d1, d2] = two_drugs();
          int p1 = b.add_mention(MentionKind::Precipitant, b.add(d1));
          b.add("or");
          int p2 = b.add_mention(MentionKind::Precipitant, b.add(d2));
          b.interactions.push_back({DdiType::UN, p1, ti, std::nullopt, std::nullopt});
          b.interactions.push_back({DdiType::UN, p2, ti, std::nullopt, std::nullopt});
        } else {
          int p = b.add_mention(MentionKind::Precipitant, b.add(drug()));
          b.interactions.push_back({DdiType::UN, p, ti, std::nullopt, std::nullopt});
        }
        b.end();
        break;
      }
      case 1: {  // P should not be coadministered with L.
        Span p = b.add(drug());
        Span t = b.add("should not be coadministered");
        b.add("with");
        b.add(label_name());
        b.end();
        int pi = b.add_mention(MentionKind::Precipitant, p);
        int ti = b.add_mention(MentionKind::Trigger, t, DdiType::UN);
        b.interactions.push_back({DdiType::UN, pi, ti, std::nullopt, std::nullopt});
        break;
      }
      case 2: {  // Caution should be used when P is coadministered.
        Span t = b.add("caution should be used");
        b.add("when");
        Span p = b.add(drug());
        b.add("is coadministered");
        b.end();
        int pi = b.add_mention(MentionKind::Precipitant, p);
        int ti = b.add_mention(MentionKind::Trigger, t, DdiType::UN);
        b.interactions.push_back({DdiType::UN, pi, ti, std::nullopt, std::nullopt});
        break;
      }
      default: {  // L is contraindicated with P.
        b.add(label_name());
        b.add("is");
        Span t = b.add("contraindicated");
        b.add(rng_.chance(50) ? "with" : "in patients receiving");
        Span p = b.add(drug());
        b.end();
        int pi = b.add_mention(MentionKind::Precipitant, p);
        int ti = b.add_mention(MentionKind::Trigger, t, DdiType::UN);
        b.interactions.push_back({DdiType::UN, pi, ti, std::nullopt, std::nullopt});
        break;
      }
    }
    return b;
  }

  SentenceBuilder negative_sentence() {
    SentenceBuilder b;
    switch (rng_.below(6)) {
      case 0:
        b.add(label_name());
        b.add("is extensively metabolized by the liver");
        break;
      case 1:
        b.add(drug());
        b.add("was not studied in this population");
        break;
      case 2: {
        static const std::array<const char*, 4> hours = {"12.5", "6", "36", "2.4"};
        b.add("the mean half-life of");
        b.add(label_name());
        b.add("is");
        b.add(rng_.pick(hours));
        b.add("hours");
        break;
      }
      case 3:
        b.add("in a study with");
        b.add(drug());
        b.add(", no clinically significant changes in");
        b.add(label_name());
        b.add("exposure were observed");
        break;
      case 4: {
        static const std::array<const char*, 4> pct = {"86%", "99%", "40%", "93%"};
        b.add("approximately");
        b.add(rng_.pick(pct));
        b.add("of");
        b.add(label_name());
        b.add("is bound to plasma proteins");
        break;
      }
      default:
        b.add(label_name());
        b.add("tablets contain lactose");
        break;
    }
    b.end();
    return b;
  }

  Rng& rng_;
  const LabelEntry& label_;
};

}  // namespace

std::vector<Document> synth_corpus(std::uint64_t seed, int n_docs) {
  std::vector<Document> docs;
  if (n_docs <= 0) return docs;
  Rng rng(seed);
  docs.reserve(n_docs);
  for (int d = 0; d < n_docs; ++d) {
    const LabelEntry& label = rng.pick(label_pool());
    Document doc;
    doc.id = "synth" + std::to_string(seed) + "-" + std::to_string(d);
    doc.label_drug = label.name;
    for (const char* a : label.aliases) doc.label_drug_aliases.push_back(a);

    DocGenerator gen(rng, label);
    int n_sent = 3 + static_cast<int>(rng.below(5));
    int next_id = 1;
    for (int s = 0; s < n_sent; ++s) {
      SentenceBuilder b = gen.sentence();
      doc.sentences.push_back(Sentence::from_text(b.text()));
      std::vector<std::string> ids;
      for (const auto& m : b.mentions) {
        ids.push_back("m" + std::to_string(next_id++));
        doc.mentions.push_back({ids.back(), m.kind, s, m.span, m.ddi});
      }
      for (const auto& in : b.interactions) {
        Interaction out;
        out.type = in.type;
        out.precipitant = ids[in.precipitant];
        out.trigger = ids[in.trigger];
        if (in.specific) out.specific_interaction = ids[*in.specific];
        out.pk_subtype = in.subtype;
        doc.interactions.push_back(std::move(out));
      }
    }
    validate(doc);
    docs.push_back(std::move(doc));
  }
  return docs;
}

}  // namespace ddix::corpus
