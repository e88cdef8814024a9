#include "evcore/word_vectors.h"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "evcore/errors.h"

namespace evcore {

namespace {

std::vector<std::string> split_spaces(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string item;
  while (in >> item) out.push_back(item);
  return out;
}

bool is_integer(const std::string& text) {
  std::size_t value;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  return ec == std::errc() && ptr == end;
}

}  // namespace

bool WordVectors::add(const std::string& word, std::span<const double> values) {
  if (values.size() != dimension_) {
    throw ShapeError("word vector for '" + word + "' has " + std::to_string(values.size()) +
                     " values, expected " + std::to_string(dimension_));
  }
  auto [it, inserted] = index_.try_emplace(word, values_.size() / (dimension_ ? dimension_ : 1));
  if (!inserted) return false;
  values_.insert(values_.end(), values.begin(), values.end());
  return true;
}

std::span<const double> WordVectors::lookup(const std::string& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return {};
  return std::span<const double>(values_).subspan(it->second * dimension_, dimension_);
}

WordVectors read_word_vectors(std::istream& in, const std::string& source_name,
                              const std::unordered_set<std::string>* keep) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<WordVectors> table;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = split_spaces(line);
    if (fields.empty()) continue;
    if (!table && line_no == 1 && fields.size() == 2 && is_integer(fields[0]) && is_integer(fields[1])) {
      const std::size_t dim = std::stoul(fields[1]);
      if (dim == 0) throw ParseError(source_name, line_no, "header declares zero dimension");
      table.emplace(dim);
      continue;
    }
    if (fields.size() < 2) throw ParseError(source_name, line_no, "word vector line needs a word and values");
    if (!table) table.emplace(fields.size() - 1);
    if (fields.size() - 1 != table->dimension()) {
      throw ParseError(source_name, line_no,
                       "expected " + std::to_string(table->dimension()) + " values, found " +
                           std::to_string(fields.size() - 1));
    }
    if (keep && !keep->count(fields[0])) continue;
    values.resize(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      const std::string& f = fields[i];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), values[i - 1]);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw ParseError(source_name, line_no, "bad number '" + f + "'");
      }
    }
    table->add(fields[0], values);
  }
  if (!table) throw ParseError(source_name, line_no, "no word vectors found");
  return std::move(*table);
}

WordVectors load_word_vectors(const std::filesystem::path& path, const std::unordered_set<std::string>* keep) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open word vector file " + path.string());
  return read_word_vectors(in, path.string(), keep);
}

}  // namespace evcore
