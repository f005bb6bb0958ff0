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

#include "factpipe/corpus/article_store.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "factpipe/common/error.h"
#include "factpipe/common/hash.h"
#include "factpipe/common/log.h"
#include "factpipe/lexicon/stemmer.h"
#include "factpipe/lexicon/tokenizer.h"
#include "json.hpp"

namespace factpipe::corpus {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char kManifestMagic[] = "factpipe-store 1";
constexpr std::size_t kCacheCapacity = 4096;

std::vector<fs::path> dump_files(const fs::path& dump) {
  std::error_code ec;
  if (fs::is_directory(dump, ec)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dump)) {
      if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
  }
  if (!fs::exists(dump, ec)) throw IoError("dump not found: " + dump.string());
  return {dump};
}

bool parse_line_no(std::string_view s, int& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && out >= 0;
}

json article_to_json(const Article& a) {
  json lines = json::array();
  for (const auto& l : a.lines) lines.push_back(l.sentence);
  return json{{"id", a.id}, {"text", a.text}, {"lines", std::move(lines)}};
}

Article article_from_json(const json& j) {
  Article a;
  a.id = j.at("id").get<std::string>();
  a.text = j.at("text").get<std::string>();
  int n = 0;
  for (const auto& s : j.at("lines")) a.lines.push_back(ArticleLine{n++, s.get<std::string>()});
  return a;
}

template <typename F>
void for_each_record(const fs::path& dump, IngestStats& stats, F&& on_article) {
  for (const fs::path& file : dump_files(dump)) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError("cannot read dump file " + file.string());
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      ++stats.records;
      auto article = parse_dump_record(line, &stats.malformed_lines);
      if (!article) {
        ++stats.malformed_records;
        continue;
      }
      on_article(std::move(*article));
    }
  }
}

}  // namespace

std::optional<Article> parse_dump_record(std::string_view json_line, std::size_t* malformed_lines) {
  json j = json::parse(json_line, nullptr, /*allow_exceptions=*/false);
  if (!j.is_object()) return std::nullopt;
  auto id_it = j.find("id");
  if (id_it == j.end() || !id_it->is_string()) return std::nullopt;
  Article a;
  a.id = id_it->get<std::string>();
  if (a.id.empty()) return std::nullopt;
  if (auto t = j.find("text"); t != j.end() && t->is_string()) a.text = t->get<std::string>();
  auto lines_it = j.find("lines");
  if (lines_it == j.end() || lines_it->is_null()) return a;
  if (!lines_it->is_string()) return std::nullopt;
  const std::string raw = lines_it->get<std::string>();
  std::string_view rest(raw);
  while (!rest.empty()) {
    const std::size_t nl = rest.find('\n');
    std::string_view segment = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view() : rest.substr(nl + 1);
    if (segment.empty()) continue;
    const std::size_t tab = segment.find('\t');
    int line_no = 0;
    if (!parse_line_no(segment.substr(0, tab), line_no) || line_no < static_cast<int>(a.lines.size())) {
      if (malformed_lines) ++*malformed_lines;
      continue;
    }
    std::string sentence;
    if (tab != std::string_view::npos) {
      std::string_view after = segment.substr(tab + 1);
      sentence = std::string(after.substr(0, after.find('\t')));
    }
    while (static_cast<int>(a.lines.size()) < line_no) {
      a.lines.push_back(ArticleLine{static_cast<int>(a.lines.size()), ""});
    }
    a.lines.push_back(ArticleLine{line_no, std::move(sentence)});
  }
  return a;
}

std::vector<std::string> title_stems(std::string_view id) {
  std::set<std::string> stems;
  for (const auto& tok : lexicon::tokenize(display_title(id)).tokens) {
    if (lexicon::is_word_token(tok.text)) stems.insert(lexicon::stem(tok.text));
  }
  return {stems.begin(), stems.end()};
}

void TitleIndex::add(const std::string& id) {
  for (auto& s : title_stems(id)) postings_[s].push_back(id);
}

void TitleIndex::finalize() {
  for (auto& [_, ids] : postings_) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  }
}

const std::vector<std::string>& TitleIndex::postings(const std::string& stem) const {
  static const std::vector<std::string> kEmpty;
  auto it = postings_.find(stem);
  return it == postings_.end() ? kEmpty : it->second;
}

void TitleIndex::save(const fs::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& [stem, ids] : postings_) {
    out << stem << '\t';
    for (std::size_t i = 0; i < ids.size(); ++i) out << (i ? " " : "") << ids[i];
    out << '\n';
  }
}

TitleIndex TitleIndex::load(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  TitleIndex index;
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) throw FormatError(path.string() + ": malformed posting line");
    auto& ids = index.postings_[line.substr(0, tab)];
    std::istringstream rest(line.substr(tab + 1));
    std::string id;
    while (rest >> id) ids.push_back(id);
  }
  return index;
}

struct ArticleStore::DiskBacking {
  int fd = -1;
  std::unordered_map<std::string, std::pair<std::uint64_t, std::uint64_t>> offsets;
  mutable std::mutex mu;
  mutable std::unordered_map<std::string, std::shared_ptr<const Article>> cache;

  ~DiskBacking() {
    if (fd >= 0) ::close(fd);
  }

  std::shared_ptr<const Article> read(std::string_view id) const {
    auto it = offsets.find(std::string(id));
    if (it == offsets.end()) return nullptr;
    {
      std::lock_guard<std::mutex> lock(mu);
      if (auto c = cache.find(it->first); c != cache.end()) return c->second;
    }
    std::string buf(it->second.second, '\0');
    std::size_t done = 0;
    while (done < buf.size()) {
      const ssize_t n = ::pread(fd, buf.data() + done, buf.size() - done, static_cast<off_t>(it->second.first + done));
      if (n <= 0) throw IoError("short read for page '" + it->first + "'");
      done += static_cast<std::size_t>(n);
    }
    auto article = std::make_shared<const Article>(article_from_json(json::parse(buf)));
    std::lock_guard<std::mutex> lock(mu);
    if (cache.size() >= kCacheCapacity) cache.clear();
    cache.emplace(it->first, article);
    return article;
  }
};

ArticleStore::ArticleStore() = default;
ArticleStore::ArticleStore(ArticleStore&&) noexcept = default;
ArticleStore& ArticleStore::operator=(ArticleStore&&) noexcept = default;
ArticleStore::~ArticleStore() = default;

void ArticleStore::index_ids() {
  std::sort(ids_.begin(), ids_.end());
  titles_ = TitleIndex();
  for (const auto& id : ids_) titles_.add(id);
  titles_.finalize();
}

ArticleStore ArticleStore::ingest(const fs::path& dump, IngestStats* stats) {
  IngestStats local;
  IngestStats& st = stats ? *stats : local;
  ArticleStore store;
  for_each_record(dump, st, [&](Article&& a) {
    auto [it, inserted] = store.resident_.try_emplace(a.id, nullptr);
    if (!inserted) {
      ++st.duplicates;
      log::warn("duplicate page id '", a.id, "': later record replaces earlier one");
    }
    it->second = std::make_shared<const Article>(std::move(a));
  });
  store.ids_.reserve(store.resident_.size());
  for (const auto& [id, _] : store.resident_) store.ids_.push_back(id);
  store.index_ids();
  st.articles = store.ids_.size();
  if (st.malformed_records || st.malformed_lines) {
    log::warn("ingest: skipped ", st.malformed_records, " malformed records and ", st.malformed_lines,
              " malformed line segments");
  }
  return store;
}

std::uint64_t ArticleStore::dump_checksum(const fs::path& dump) {
  Fnv1a h;
  std::vector<char> buf(1 << 16);
  for (const fs::path& file : dump_files(dump)) {
    h.update(file.filename().string());
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError("cannot read dump file " + file.string());
    while (in) {
      in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
      h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
    }
  }
  return h.digest();
}

void ArticleStore::save(const fs::path& store_dir, std::uint64_t checksum) const {
  fs::create_directories(store_dir);
  fs::remove(store_dir / "MANIFEST");
  {
    std::ofstream data(store_dir / "articles.dat", std::ios::binary | std::ios::trunc);
    std::ofstream index(store_dir / "articles.idx", std::ios::binary | std::ios::trunc);
    if (!data || !index) throw IoError("cannot write store in " + store_dir.string());
    std::uint64_t offset = 0;
    for (const auto& id : ids_) {
      const std::string record = article_to_json(*get(id)).dump();
      data << record << '\n';
      index << offset << '\t' << record.size() << '\t' << id << '\n';
      offset += record.size() + 1;
    }
  }
  titles_.save(store_dir / "titles.idx");
  std::ofstream manifest(store_dir / "MANIFEST", std::ios::binary | std::ios::trunc);
  char hex[32];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(checksum));
  manifest << kManifestMagic << "\nchecksum " << hex << "\narticles " << ids_.size() << "\n";
}

ArticleStore ArticleStore::open(const fs::path& store_dir) {
  std::ifstream manifest(store_dir / "MANIFEST");
  std::string magic;
  if (!manifest || !std::getline(manifest, magic) || magic != kManifestMagic) {
    throw NotFoundError("no article store in " + store_dir.string());
  }
  ArticleStore store;
  store.disk_ = std::make_unique<DiskBacking>();
  store.disk_->fd = ::open((store_dir / "articles.dat").c_str(), O_RDONLY);
  if (store.disk_->fd < 0) throw IoError("cannot open " + (store_dir / "articles.dat").string());
  std::ifstream index(store_dir / "articles.idx");
  std::string line;
  while (std::getline(index, line)) {
    std::istringstream fields(line);
    std::uint64_t offset = 0, length = 0;
    std::string id;
    if (!(fields >> offset >> length) || !fields.ignore(1) || !std::getline(fields, id)) {
      throw FormatError("malformed line in articles.idx: " + line);
    }
    store.disk_->offsets.emplace(id, std::make_pair(offset, length));
    store.ids_.push_back(std::move(id));
  }
  std::sort(store.ids_.begin(), store.ids_.end());
  store.titles_ = TitleIndex::load(store_dir / "titles.idx");
  return store;
}

ArticleStore ArticleStore::open_or_build(const fs::path& dump, const fs::path& store_dir, IngestStats* stats) {
  const std::uint64_t checksum = dump_checksum(dump);
  char hex[32];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(checksum));
  {
    std::ifstream manifest(store_dir / "MANIFEST");
    std::string magic, key, value;
    if (manifest && std::getline(manifest, magic) && magic == kManifestMagic && (manifest >> key >> value) &&
        key == "checksum" && value == hex) {
      return open(store_dir);
    }
  }
  log::info("building article store in ", store_dir.string());
  ArticleStore mem = ingest(dump, stats);
  mem.save(store_dir, checksum);
  return open(store_dir);
}

bool ArticleStore::contains(std::string_view id) const {
  if (disk_) return disk_->offsets.count(std::string(id)) != 0;
  return resident_.count(std::string(id)) != 0;
}

std::shared_ptr<const Article> ArticleStore::find(std::string_view id) const {
  if (disk_) return disk_->read(id);
  auto it = resident_.find(std::string(id));
  return it == resident_.end() ? nullptr : it->second;
}

std::shared_ptr<const Article> ArticleStore::get(std::string_view id) const {
  auto a = find(id);
  if (!a) throw NotFoundError("unknown page '" + std::string(id) + "'");
  return a;
}

std::optional<std::string> ArticleStore::find_line(std::string_view id, int line_no) const {
  auto a = find(id);
  if (!a || line_no < 0 || line_no >= static_cast<int>(a->lines.size())) return std::nullopt;
  return a->lines[static_cast<std::size_t>(line_no)].sentence;
}

std::string ArticleStore::get_line(std::string_view id, int line_no) const {
  auto a = get(id);
  if (line_no < 0 || line_no >= static_cast<int>(a->lines.size())) {
    throw NotFoundError("page '" + std::string(id) + "' has no line " + std::to_string(line_no));
  }
  return a->lines[static_cast<std::size_t>(line_no)].sentence;
}

std::optional<std::string> ArticleStore::exact_title_lookup(std::string_view mention) const {
  std::string id = normalize_title(mention);
  if (contains(id)) return id;
  // Dump ids spell brackets and colons as -LRB- / -RRB- / -COLON-.
  std::string escaped;
  for (char c : id) {
    if (c == '(') escaped += "-LRB-";
    else if (c == ')') escaped += "-RRB-";
    else if (c == ':') escaped += "-COLON-";
    else escaped += c;
  }
  if (escaped != id && contains(escaped)) return escaped;
  return std::nullopt;
}

}  // namespace factpipe::corpus
