// Copyright 2026 The factpipe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FACTPIPE_CORPUS_ARTICLE_STORE_H_
#define FACTPIPE_CORPUS_ARTICLE_STORE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "factpipe/corpus/types.h"

namespace factpipe::corpus {

struct IngestStats {
  std::size_t records = 0;
  std::size_t articles = 0;
  std::size_t malformed_records = 0;
  std::size_t malformed_lines = 0;
  std::size_t duplicates = 0;
};

// Parses one dump record ({"id", "text", "lines"}). Returns nullopt for a
// malformed record; `malformed_lines` counts unparseable line segments.
std::optional<Article> parse_dump_record(std::string_view json_line, std::size_t* malformed_lines = nullptr);

// Stemmed word tokens of a page title (underscores as spaces, -LRB-/-RRB-
// decoded), deduplicated and sorted. Shared by the title index and search.
std::vector<std::string> title_stems(std::string_view id);

// Inverted index from stemmed title tokens to page ids.
class TitleIndex {
 public:
  void add(const std::string& id);
  void finalize();

  // Ids whose title contains the stem, ascending. Empty span when absent.
  const std::vector<std::string>& postings(const std::string& stem) const;
  std::size_t token_count() const { return postings_.size(); }

  void save(const std::filesystem::path& path) const;
  static TitleIndex load(const std::filesystem::path& path);

 private:
  std::map<std::string, std::vector<std::string>> postings_;
};

// Read-only view of the article dump: pages by id, numbered lines, exact and
// token-overlap title lookup.
//
// Backed either by memory (ingest) or by a store directory (open /
// open_or_build), in which case pages are read from disk on demand. All
// const methods are safe to call concurrently.
class ArticleStore {
 public:
  // Reads a dump file, or every *.jsonl file of a directory in name order,
  // into memory. Duplicate ids: the later record wins and a warning is logged.
  static ArticleStore ingest(const std::filesystem::path& dump, IngestStats* stats = nullptr);

  // Opens the store in `store_dir`, building it first when it is missing or
  // its recorded dump checksum differs from the dump's current checksum.
  static ArticleStore open_or_build(const std::filesystem::path& dump, const std::filesystem::path& store_dir,
                                    IngestStats* stats = nullptr);
  static ArticleStore open(const std::filesystem::path& store_dir);

  // Content checksum of a dump file or directory.
  static std::uint64_t dump_checksum(const std::filesystem::path& dump);

  ArticleStore(ArticleStore&&) noexcept;
  ArticleStore& operator=(ArticleStore&&) noexcept;
  ~ArticleStore();

  std::size_t size() const { return ids_.size(); }
  // All ids, ascending.
  const std::vector<std::string>& ids() const { return ids_; }
  bool contains(std::string_view id) const;

  // nullptr when unknown.
  std::shared_ptr<const Article> find(std::string_view id) const;
  // Throws NotFoundError when unknown.
  std::shared_ptr<const Article> get(std::string_view id) const;

  // Throws NotFoundError for an unknown page or line; an existing empty line
  // returns "".
  std::string get_line(std::string_view id, int line_no) const;
  std::optional<std::string> find_line(std::string_view id, int line_no) const;

  // Spaces and underscores are equivalent; otherwise case-sensitive.
  std::optional<std::string> exact_title_lookup(std::string_view mention) const;

  const TitleIndex& titles() const { return titles_; }

  // Writes the directory layout (MANIFEST, articles.dat, articles.idx,
  // titles.idx) for this store.
  void save(const std::filesystem::path& store_dir, std::uint64_t checksum) const;

 private:
  ArticleStore();

  struct DiskBacking;

  void index_ids();

  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::shared_ptr<const Article>> resident_;
  std::unique_ptr<DiskBacking> disk_;
  TitleIndex titles_;
};

}  // namespace factpipe::corpus

#endif  // FACTPIPE_CORPUS_ARTICLE_STORE_H_
