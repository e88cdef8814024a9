#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace evcore {

// Pretrained word embeddings, all of one dimension.
class WordVectors {
 public:
  WordVectors() = default;
  explicit WordVectors(std::size_t dimension) : dimension_(dimension) {}

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return index_.size(); }

  // Returns false (and keeps the first entry) when the word is already present.
  bool add(const std::string& word, std::span<const double> values);

  // Empty span for out-of-vocabulary words.
  std::span<const double> lookup(const std::string& word) const;
  bool contains(const std::string& word) const { return index_.count(word) != 0; }

 private:
  std::size_t dimension_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> values_;
};

// word2vec/GloVe text format: "word v1 ... vE" per line, with an optional
// "count dim" header line. When keep is given, other words are skipped.
WordVectors read_word_vectors(std::istream& in, const std::string& source_name = "<stream>",
                              const std::unordered_set<std::string>* keep = nullptr);
WordVectors load_word_vectors(const std::filesystem::path& path,
                              const std::unordered_set<std::string>* keep = nullptr);

}  // namespace evcore
