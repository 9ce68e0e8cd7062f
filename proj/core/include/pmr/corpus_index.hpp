#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pmr/article.hpp"
#include "pmr/common.hpp"

namespace pmr {

using DocId = std::uint32_t;

struct Posting {
  DocId doc = 0;
  std::vector<std::uint32_t> positions;  // strictly increasing

  std::size_t tf() const { return positions.size(); }
  bool operator==(const Posting&) const = default;
};

/// Immutable fielded inverted index over a filtered article corpus.
///
/// Documents are numbered in ingestion order. Postings for a term are
/// sorted by DocId, so df(term) is simply the posting list length. The
/// index keeps the full Article records because ranking, labeling and
/// the demographic check all need the stored fields.
class Index {
 public:
  Index() = default;

  /// Builds an index over articles that have already been validated
  /// (non-empty, unique pmids). Throws pmr::Error on duplicates.
  static Index build(std::vector<Article> articles);

  std::size_t size() const { return articles_.size(); }
  const Article& article(DocId doc) const { return articles_.at(doc); }
  const std::vector<Article>& articles() const { return articles_; }
  std::optional<DocId> find(std::string_view pmid) const;

  std::span<const Posting> postings(Field field, std::string_view term) const;
  std::size_t df(Field field, std::string_view term) const { return postings(field, term).size(); }
  std::uint32_t field_length(Field field, DocId doc) const;
  std::size_t vocabulary_size(Field field) const;

  /// Occurrence count of `term` in one field of one document.
  std::size_t tf(Field field, std::string_view term, DocId doc) const;
  const Posting* posting(Field field, std::string_view term, DocId doc) const;

  /// sqrt(tf) * idf^2 / sqrt(field length), idf = 1 + ln(N / (df + 1)).
  /// Zero when the term does not occur in that field of the document.
  double term_score(Field field, std::string_view term, DocId doc) const;
  /// Same, addressed by pmid. Throws std::out_of_range for unknown pmids.
  double term_score(Field field, std::string_view term, std::string_view pmid) const;

  /// Versioned text snapshot; see docs/index-snapshot.md. Output is
  /// canonical: equal indexes serialize to identical bytes.
  void write_snapshot(std::ostream& out) const;
  static Index read_snapshot(std::istream& in);

  bool operator==(const Index& other) const;

 private:
  struct FieldIndex {
    std::unordered_map<std::string, std::vector<Posting>> postings;
    std::vector<std::uint32_t> lengths;
  };

  const FieldIndex& field_index(Field field) const { return fields_[static_cast<std::size_t>(field)]; }
  void add_document(const Article& article);
  void rebuild_lookup();

  std::vector<Article> articles_;
  std::unordered_map<std::string, DocId> by_pmid_;
  std::array<FieldIndex, kFieldCount> fields_;
};

inline constexpr int kSnapshotVersion = 1;

struct IngestResult {
  Index index;
  std::size_t records_read = 0;
  std::size_t kept = 0;
  std::size_t filtered = 0;  // failed the MeSH category filter
  std::size_t rejected = 0;  // malformed or duplicate
  Issues issues;
};

/// Reads newline-delimited JSON article records, keeps those passing
/// mesh_filter, and indexes title, abstract and keywords separately.
/// Malformed records and duplicate pmids are reported and skipped.
IngestResult ingest_corpus(std::istream& in, std::string_view source = "corpus");

}  // namespace pmr
