#include "pmr/corpus_index.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pmr/tokenizer.hpp"

namespace pmr {

using nlohmann::json;

void Index::add_document(const Article& article) {
  const auto doc = static_cast<DocId>(articles_.size());
  for (Field field : kFields) {
    auto& fi = fields_[static_cast<std::size_t>(field)];
    const auto tokens = tokenize(article.field_text(field));
    fi.lengths.push_back(static_cast<std::uint32_t>(tokens.size()));
    for (std::uint32_t pos = 0; pos < tokens.size(); ++pos) {
      auto& list = fi.postings[tokens[pos]];
      if (list.empty() || list.back().doc != doc) list.push_back(Posting{doc, {}});
      list.back().positions.push_back(pos);
    }
  }
  by_pmid_.emplace(article.pmid, doc);
  articles_.push_back(article);
}

Index Index::build(std::vector<Article> articles) {
  Index index;
  index.articles_.reserve(articles.size());
  for (auto& article : articles) {
    if (article.pmid.empty()) throw Error("article with empty pmid");
    if (index.by_pmid_.count(article.pmid)) throw Error("duplicate pmid " + article.pmid);
    index.add_document(article);
  }
  return index;
}

void Index::rebuild_lookup() {
  by_pmid_.clear();
  for (DocId d = 0; d < articles_.size(); ++d) {
    if (!by_pmid_.emplace(articles_[d].pmid, d).second) throw Error("duplicate pmid " + articles_[d].pmid);
  }
}

std::optional<DocId> Index::find(std::string_view pmid) const {
  auto it = by_pmid_.find(std::string(pmid));
  if (it == by_pmid_.end()) return std::nullopt;
  return it->second;
}

std::span<const Posting> Index::postings(Field field, std::string_view term) const {
  const auto& map = field_index(field).postings;
  auto it = map.find(std::string(term));
  if (it == map.end()) return {};
  return it->second;
}

std::uint32_t Index::field_length(Field field, DocId doc) const { return field_index(field).lengths.at(doc); }

std::size_t Index::vocabulary_size(Field field) const { return field_index(field).postings.size(); }

const Posting* Index::posting(Field field, std::string_view term, DocId doc) const {
  auto list = postings(field, term);
  auto it = std::lower_bound(list.begin(), list.end(), doc, [](const Posting& p, DocId d) { return p.doc < d; });
  if (it == list.end() || it->doc != doc) return nullptr;
  return &*it;
}

std::size_t Index::tf(Field field, std::string_view term, DocId doc) const {
  const Posting* p = posting(field, term, doc);
  return p ? p->tf() : 0;
}

double Index::term_score(Field field, std::string_view term, DocId doc) const {
  auto list = postings(field, term);
  auto it = std::lower_bound(list.begin(), list.end(), doc, [](const Posting& p, DocId d) { return p.doc < d; });
  if (it == list.end() || it->doc != doc) return 0.0;
  const double n = static_cast<double>(size());
  const double idf = 1.0 + std::log(n / (static_cast<double>(list.size()) + 1.0));
  const double norm = 1.0 / std::sqrt(static_cast<double>(field_length(field, doc)));
  return std::sqrt(static_cast<double>(it->tf())) * idf * idf * norm;
}

double Index::term_score(Field field, std::string_view term, std::string_view pmid) const {
  auto doc = find(pmid);
  if (!doc) throw std::out_of_range("pmid not indexed: " + std::string(pmid));
  return term_score(field, term, *doc);
}

bool Index::operator==(const Index& other) const {
  if (articles_ != other.articles_) return false;
  for (std::size_t f = 0; f < kFieldCount; ++f) {
    if (fields_[f].lengths != other.fields_[f].lengths) return false;
    if (fields_[f].postings != other.fields_[f].postings) return false;
  }
  return true;
}

// Snapshot layout, one record per line:
//   pmr-index <v>
//   articles <N>
//   <N article JSON objects>
//   field <name> <vocabulary size>
//   lengths <len_0> ... <len_N-1>
//   <term> <df> <doc>:<pos>,<pos>;<doc>:<pos>...     (terms in byte order)
//   ... repeated per field ...
//   end
// Separators are tabs except inside the lengths and postings payloads.
void Index::write_snapshot(std::ostream& out) const {
  out << "pmr-index\t" << kSnapshotVersion << '\n';
  out << "articles\t" << articles_.size() << '\n';
  for (const auto& a : articles_) out << to_json(a).dump() << '\n';
  for (Field field : kFields) {
    const auto& fi = field_index(field);
    out << "field\t" << field_name(field) << '\t' << fi.postings.size() << '\n';
    out << "lengths\t";
    for (std::size_t i = 0; i < fi.lengths.size(); ++i) out << (i ? " " : "") << fi.lengths[i];
    out << '\n';

    std::vector<const std::string*> terms;
    terms.reserve(fi.postings.size());
    for (const auto& [term, _] : fi.postings) terms.push_back(&term);
    std::sort(terms.begin(), terms.end(), [](const auto* a, const auto* b) { return *a < *b; });
    for (const auto* term : terms) {
      const auto& list = fi.postings.at(*term);
      out << *term << '\t' << list.size() << '\t';
      for (std::size_t i = 0; i < list.size(); ++i) {
        if (i) out << ';';
        out << list[i].doc << ':';
        for (std::size_t j = 0; j < list[i].positions.size(); ++j) out << (j ? "," : "") << list[i].positions[j];
      }
      out << '\n';
    }
  }
  out << "end\n";
}

namespace {

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(sep, start);
    parts.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::uint64_t parse_uint(const std::string& text, std::size_t line_no) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    throw Error("index snapshot line " + std::to_string(line_no) + ": expected an unsigned integer, got '" + text + "'");
  return std::stoull(text);
}

}  // namespace

Index Index::read_snapshot(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next = [&]() -> const std::string& {
    if (!std::getline(in, line)) throw Error("index snapshot truncated after line " + std::to_string(line_no));
    ++line_no;
    return line;
  };
  auto fail = [&](const std::string& what) {
    return Error("index snapshot line " + std::to_string(line_no) + ": " + what);
  };

  auto header = split(next(), '\t');
  if (header.size() != 2 || header[0] != "pmr-index") throw fail("not a pmr index snapshot");
  if (parse_uint(header[1], line_no) != kSnapshotVersion) throw fail("unsupported snapshot version " + header[1]);

  auto count = split(next(), '\t');
  if (count.size() != 2 || count[0] != "articles") throw fail("expected article count");
  const auto n = parse_uint(count[1], line_no);

  Index index;
  index.articles_.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    try {
      index.articles_.push_back(article_from_json(json::parse(next())));
    } catch (const json::exception& e) {
      throw fail(e.what());
    } catch (const Error& e) {
      throw fail(e.what());
    }
  }
  index.rebuild_lookup();

  for (Field field : kFields) {
    auto head = split(next(), '\t');
    if (head.size() != 3 || head[0] != "field" || head[1] != field_name(field))
      throw fail("expected field section '" + std::string(field_name(field)) + "'");
    const auto vocab = parse_uint(head[2], line_no);
    auto& fi = index.fields_[static_cast<std::size_t>(field)];

    auto lengths = split(next(), '\t');
    if (lengths.size() != 2 || lengths[0] != "lengths") throw fail("expected lengths");
    if (!lengths[1].empty())
      for (const auto& v : split(lengths[1], ' ')) fi.lengths.push_back(static_cast<std::uint32_t>(parse_uint(v, line_no)));
    if (fi.lengths.size() != n) throw fail("lengths count does not match article count");

    for (std::uint64_t t = 0; t < vocab; ++t) {
      auto parts = split(next(), '\t');
      if (parts.size() != 3 || parts[0].empty()) throw fail("malformed postings line");
      const auto df = parse_uint(parts[1], line_no);
      std::vector<Posting> list;
      for (const auto& entry : split(parts[2], ';')) {
        auto colon = entry.find(':');
        if (colon == std::string::npos) throw fail("malformed posting '" + entry + "'");
        Posting p;
        const auto doc = parse_uint(entry.substr(0, colon), line_no);
        if (doc >= n) throw fail("posting refers to unknown document");
        if (!list.empty() && doc <= list.back().doc) throw fail("postings not sorted by document");
        p.doc = static_cast<DocId>(doc);
        for (const auto& pos : split(std::string_view(entry).substr(colon + 1), ',')) {
          auto value = static_cast<std::uint32_t>(parse_uint(pos, line_no));
          if (!p.positions.empty() && value <= p.positions.back()) throw fail("positions not strictly increasing");
          if (value >= fi.lengths[p.doc]) throw fail("position beyond field length");
          p.positions.push_back(value);
        }
        list.push_back(std::move(p));
      }
      if (list.size() != df) throw fail("df does not match posting count");
      if (!fi.postings.emplace(parts[0], std::move(list)).second) throw fail("duplicate term " + parts[0]);
    }
  }
  if (next() != "end") throw fail("expected end marker");
  return index;
}

IngestResult ingest_corpus(std::istream& in, std::string_view source) {
  IngestResult result;
  std::vector<Article> kept;
  std::unordered_map<std::string, std::size_t> seen;  // pmid -> line
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++result.records_read;
    Article article;
    try {
      article = article_from_json(json::parse(line));
    } catch (const json::exception& e) {
      result.issues.push_back({std::string(source), line_no, std::string("malformed record: ") + e.what()});
      ++result.rejected;
      continue;
    } catch (const Error& e) {
      result.issues.push_back({std::string(source), line_no, std::string("malformed record: ") + e.what()});
      ++result.rejected;
      continue;
    }
    auto [it, inserted] = seen.emplace(article.pmid, line_no);
    if (!inserted) {
      result.issues.push_back({std::string(source), line_no,
                               "duplicate pmid " + article.pmid + " (first seen on line " + std::to_string(it->second) + ")"});
      ++result.rejected;
      continue;
    }
    if (!mesh_filter(article)) {
      ++result.filtered;
      continue;
    }
    kept.push_back(std::move(article));
  }
  result.kept = kept.size();
  result.index = Index::build(std::move(kept));
  return result;
}

}  // namespace pmr
