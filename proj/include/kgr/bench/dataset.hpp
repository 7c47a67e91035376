#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kgr::bench {

// One benchmark question. Dataset file: one record per line,
//   question <TAB> topic-id(;topic-id)* <TAB> answer(;answer)*
// with '#' comment lines. Answers may be entity ids or display labels.
struct QaExample {
  std::string question;
  std::vector<std::string> topic_ids;
  std::vector<std::string> gold_answers;
};

std::vector<QaExample> load_dataset(std::istream& in);
std::vector<QaExample> load_dataset_file(const std::string& path);

}  // namespace kgr::bench
