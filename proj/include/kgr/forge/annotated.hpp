#pragma once

#include <string>
#include <variant>
#include <vector>

namespace kgr::forge {

// Segments of one training sample, mirroring the corpus grammar:
//
//   sample  := hop* answer
//   hop     := "@[Retrieve Relation]@" kblock relmark*
//              ["@[Retrieve Entity]@" kblock relmark* ratmark]
//   kblock  := "{<paragraph>" item (";" item)* "</paragraph>}"
//   relmark := item ("+[" relevance "]+" | "[Unrelevant]")
//   ratmark := "=[" rationality "]="
//   answer  := "@[No Retrieval]@Answer: " ans (";" ans)* "^[Utility:" 1-5 "]^"
//
// Serialization renders Unrelevant marks bare (no '+' wrappers); parsing
// accepts both that spelling and "+[Unrelevant]+", and both marker aliases
// "[Retrieve Relation]"/"[Relation Retrieval]" (same for Entity).

enum class RetrievalKind { Relation, Entity };

struct RetrievalMarker {
  RetrievalKind kind = RetrievalKind::Relation;
  friend bool operator==(const RetrievalMarker&, const RetrievalMarker&) = default;
};

struct KnowledgeBlock {
  std::vector<std::string> items;
  friend bool operator==(const KnowledgeBlock&, const KnowledgeBlock&) = default;
};

struct RelevanceMark {
  std::string item;
  int category = 0;  // reflect::cat::kFullyRelevant etc.
  friend bool operator==(const RelevanceMark&, const RelevanceMark&) = default;
};

struct RationalityMark {
  int category = 0;  // reflect::cat::kFullyReasonable etc.
  friend bool operator==(const RationalityMark&, const RationalityMark&) = default;
};

struct AnswerBlock {
  std::vector<std::string> answers;
  int utility_level = 5;  // 1..5
  friend bool operator==(const AnswerBlock&, const AnswerBlock&) = default;
};

using Segment = std::variant<RetrievalMarker, KnowledgeBlock, RelevanceMark,
                             RationalityMark, AnswerBlock>;

struct AnnotatedPath {
  std::vector<Segment> segments;

  // Grammar-shape invariants: exactly one AnswerBlock and it is final, every
  // knowledge block directly follows its retrieval marker, rationality marks
  // close entity blocks, and an Unreasonable mark is immediately followed by
  // the AnswerBlock. Throws DataError when violated.
  void validate() const;

  friend bool operator==(const AnnotatedPath&, const AnnotatedPath&) = default;
};

// Emits the grammar above; validates first and rejects items/answers that
// embed grammar delimiters. Throws DataError.
std::string serialize(const AnnotatedPath& path);

// Inverse of serialize on its image. Throws DataError carrying a byte offset
// on malformed input.
AnnotatedPath parse(const std::string& text);

}  // namespace kgr::forge
