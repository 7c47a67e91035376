#include "kgr/bench/dataset.hpp"

#include <fstream>
#include <sstream>

#include "kgr/error.hpp"

namespace kgr::bench {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(s);
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

std::vector<QaExample> load_dataset(std::istream& in) {
  std::vector<QaExample> out;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 3) {
      throw DataError("dataset line " + std::to_string(row) +
                      ": expected 'question<TAB>topics<TAB>answers'");
    }
    QaExample ex;
    ex.question = fields[0];
    for (auto& t : split(fields[1], ';')) {
      if (!t.empty()) ex.topic_ids.push_back(std::move(t));
    }
    for (auto& a : split(fields[2], ';')) {
      if (!a.empty()) ex.gold_answers.push_back(std::move(a));
    }
    if (ex.question.empty() || ex.topic_ids.empty() || ex.gold_answers.empty()) {
      throw DataError("dataset line " + std::to_string(row) +
                      ": question, topics and answers must be non-empty");
    }
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<QaExample> load_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset: " + path);
  return load_dataset(in);
}

}  // namespace kgr::bench
