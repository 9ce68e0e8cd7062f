#include "pmr/query.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "pmr/tokenizer.hpp"

namespace pmr {

Clause make_clause(std::string label, const TermSet& terms, double boost) {
  Clause clause{std::move(label), {}, boost};
  std::set<std::vector<std::string>> seen;
  for (const auto& term : terms) {
    auto tokens = tokenize(term);
    if (tokens.empty() || !seen.insert(tokens).second) continue;
    for (Field field : kFields) clause.matchers.push_back(Matcher{field, tokens, term});
  }
  return clause;
}

const TermSet& pediatric_keywords() {
  static const TermSet k{"child", "children", "pediatric", "paediatric", "infant", "adolescent", "childhood"};
  return k;
}

const TermSet& geriatric_keywords() {
  static const TermSet k{"elderly", "older", "aged", "geriatric"};
  return k;
}

Query formulate_query(const ExpandedProfile& ep, const QueryOptions& options) {
  Query q;
  q.must.push_back(make_clause("disease", ep.disease_terms));
  for (const auto& g : ep.genes) q.must.push_back(make_clause("gene:" + g.name, g.gene_terms));
  for (const auto& g : ep.genes)
    if (g.specified_variant) q.must.push_back(make_clause("variant:" + g.name, TermSet{*g.specified_variant}));

  TermSet treatment = ep.drug_terms;
  treatment.insert(ep.treatment_keywords.begin(), ep.treatment_keywords.end());
  q.must.push_back(make_clause("treatment", treatment));

  for (const auto& g : ep.genes)
    if (!g.specified_variant && !g.candidate_variants.empty())
      q.should.push_back(make_clause("variants:" + g.name, g.candidate_variants, options.variant_boost));
  for (const auto& o : ep.other) {
    Clause c = make_clause("other:" + o, TermSet{o}, options.should_boost);
    if (!c.matchers.empty()) q.should.push_back(std::move(c));
  }
  if (options.age_should && ep.age) {
    if (*ep.age < 18) {
      q.should.push_back(make_clause("age:pediatric", pediatric_keywords(), options.should_boost));
    } else if (*ep.age >= 65) {
      q.should.push_back(make_clause("age:geriatric", geriatric_keywords(), options.should_boost));
    }
  }
  return q;
}

namespace {

void render_matcher(std::ostream& out, const Matcher& m) {
  out << field_name(m.field) << ':';
  if (m.tokens.size() == 1) {
    out << m.tokens.front();
    return;
  }
  out << '"';
  for (std::size_t i = 0; i < m.tokens.size(); ++i) out << (i ? " " : "") << m.tokens[i];
  out << '"';
}

void render_clause(std::ostream& out, char prefix, const Clause& c) {
  if (prefix) out << prefix;
  out << c.label << ":(";
  for (std::size_t i = 0; i < c.matchers.size(); ++i) {
    if (i) out << ' ';
    render_matcher(out, c.matchers[i]);
  }
  out << ')';
  if (c.boost != 1.0) out << '^' << c.boost;
  out << '\n';
}

}  // namespace

std::string Query::to_string() const {
  std::ostringstream out;
  for (const auto& c : must) render_clause(out, '+', c);
  for (const auto& c : must_not) render_clause(out, '-', c);
  for (const auto& c : should) render_clause(out, 0, c);
  return out.str();
}

std::string_view label_name(Label label) { return label == Label::relevant ? "relevant" : "irrelevant"; }

namespace {

struct ClauseHits {
  std::unordered_map<DocId, double> score;                  // boosted
  std::unordered_map<DocId, std::vector<std::string>> terms;
};

// Adds `matcher`'s per-document score into `out`.
void match(const Matcher& m, const Index& index, std::unordered_map<DocId, double>& out,
           std::unordered_map<DocId, std::vector<std::string>>& terms) {
  const auto first = index.postings(m.field, m.tokens.front());
  for (const Posting& p : first) {
    bool found = m.tokens.size() == 1;
    if (!found) {
      std::vector<const Posting*> rest;
      rest.reserve(m.tokens.size() - 1);
      for (std::size_t i = 1; i < m.tokens.size(); ++i) {
        const Posting* q = index.posting(m.field, m.tokens[i], p.doc);
        if (!q) break;
        rest.push_back(q);
      }
      if (rest.size() + 1 != m.tokens.size()) continue;
      for (auto start : p.positions) {
        bool ok = true;
        for (std::size_t i = 0; i < rest.size() && ok; ++i)
          ok = std::binary_search(rest[i]->positions.begin(), rest[i]->positions.end(),
                                  start + static_cast<std::uint32_t>(i + 1));
        if (ok) {
          found = true;
          break;
        }
      }
    }
    if (!found) continue;
    double s = 0.0;
    for (const auto& tok : m.tokens) s += index.term_score(m.field, tok, p.doc);
    out[p.doc] += s;
    terms[p.doc].push_back(m.term);
  }
}

ClauseHits evaluate_clause(const Clause& c, const Index& index) {
  ClauseHits hits;
  for (const auto& m : c.matchers)
    if (!m.tokens.empty()) match(m, index, hits.score, hits.terms);
  for (auto& [doc, s] : hits.score) s *= c.boost;
  return hits;
}

}  // namespace

std::vector<ScoredArticle> execute(const Query& query, const Index& index) {
  if (query.must.empty() && query.should.empty()) return {};

  std::vector<ClauseHits> must_hits;
  must_hits.reserve(query.must.size());
  for (const auto& c : query.must) must_hits.push_back(evaluate_clause(c, index));

  std::vector<DocId> candidates;
  if (!query.must.empty()) {
    auto smallest = std::min_element(must_hits.begin(), must_hits.end(),
                                     [](const auto& a, const auto& b) { return a.score.size() < b.score.size(); });
    for (const auto& [doc, _] : smallest->score) {
      bool all = std::all_of(must_hits.begin(), must_hits.end(), [&](const auto& h) { return h.score.count(doc) > 0; });
      if (all) candidates.push_back(doc);
    }
  }

  std::vector<ClauseHits> should_hits;
  for (const auto& c : query.should) should_hits.push_back(evaluate_clause(c, index));
  if (query.must.empty()) {
    std::set<DocId> any;
    for (const auto& h : should_hits)
      for (const auto& [doc, _] : h.score) any.insert(doc);
    candidates.assign(any.begin(), any.end());
  }

  std::vector<ClauseHits> not_hits;
  for (const auto& c : query.must_not) not_hits.push_back(evaluate_clause(c, index));

  std::sort(candidates.begin(), candidates.end());
  const double total = static_cast<double>(query.must.size() + query.should.size());
  std::vector<ScoredArticle> results;
  for (DocId doc : candidates) {
    if (std::any_of(not_hits.begin(), not_hits.end(), [&](const auto& h) { return h.score.count(doc) > 0; })) continue;

    ScoredArticle sa;
    sa.doc = doc;
    sa.pmid = index.article(doc).pmid;
    std::size_t matched = 0;
    double sum = 0.0;
    std::set<std::string> terms;
    auto take = [&](const ClauseHits& h, bool should) {
      auto it = h.score.find(doc);
      if (it == h.score.end()) {
        sa.clause_scores.push_back(0.0);
        return;
      }
      ++matched;
      if (should) ++sa.matched_should;
      sum += it->second;
      sa.clause_scores.push_back(it->second);
      const auto& t = h.terms.at(doc);
      terms.insert(t.begin(), t.end());
    };
    for (const auto& h : must_hits) take(h, false);
    for (const auto& h : should_hits) take(h, true);
    sa.coord = static_cast<double>(matched) / total;
    sa.score = sa.coord * sum;
    sa.matched_terms.assign(terms.begin(), terms.end());
    results.push_back(std::move(sa));
  }
  return results;
}

const TermSet& male_keywords() {
  static const TermSet k{"male", "males", "men", "man", "boy", "boys"};
  return k;
}

const TermSet& female_keywords() {
  static const TermSet k{"female", "females", "women", "woman", "girl", "girls"};
  return k;
}

bool demographic_compatible(const Article& article, std::optional<Gender> gender) {
  if (!gender) return true;
  bool male = false;
  bool female = false;
  for (const auto* text : {&article.title, &article.abstract}) {
    for (const auto& tok : tokenize(*text)) {
      male = male || male_keywords().count(tok) > 0;
      female = female || female_keywords().count(tok) > 0;
    }
  }
  const bool same = *gender == Gender::male ? male : female;
  const bool opposite = *gender == Gender::male ? female : male;
  return same || !opposite;
}

bool demographic_compatible(const Article& article, const PatientProfile& profile) {
  return demographic_compatible(article, profile.gender);
}

}  // namespace pmr
