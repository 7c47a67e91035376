#include "kgr/forge/annotated.hpp"

#include <algorithm>
#include <array>

#include "kgr/error.hpp"
#include "kgr/reflect/tokens.hpp"

namespace kgr::forge {

namespace cat = reflect::cat;

namespace {

constexpr const char* kRelationMarker = "@[Retrieve Relation]@";
constexpr const char* kEntityMarker = "@[Retrieve Entity]@";
constexpr const char* kAnswerMarker = "@[No Retrieval]@Answer: ";
constexpr const char* kBlockOpen = "{<paragraph>";
constexpr const char* kBlockClose = "</paragraph>}";
constexpr const char* kBareUnrelevant = "[Unrelevant]";
constexpr const char* kUtilityOpen = "^[Utility:";

[[noreturn]] void parse_fail(std::size_t offset, const std::string& what) {
  throw DataError("parse error at byte " + std::to_string(offset) + ": " + what);
}

// Substrings that would make an embedded item ambiguous to scan back out.
const std::array<const char*, 7> kForbidden = {
    ";", "+[", "[Unrelevant]", "@[", "=[", "^[", "</paragraph>"};

void check_item(const std::string& item, const char* where) {
  if (item.empty()) {
    throw DataError(std::string("cannot serialize: empty item in ") + where);
  }
  for (const char* bad : kForbidden) {
    if (item.find(bad) != std::string::npos) {
      throw DataError(std::string("cannot serialize: item in ") + where +
                      " contains delimiter '" + bad + "': " + item);
    }
  }
}

std::string relevance_name(int category) {
  switch (category) {
    case cat::kFullyRelevant: return "Fully Relevant";
    case cat::kPartiallyRelevant: return "Partially Relevant";
    case cat::kUnrelevant: return "Unrelevant";
  }
  throw DataError("invalid relevance category " + std::to_string(category));
}

std::string rationality_name(int category) {
  switch (category) {
    case cat::kFullyReasonable: return "Fully Reasonable";
    case cat::kPartiallyReasonable: return "Partially Reasonable";
    case cat::kUnreasonable: return "Unreasonable";
  }
  throw DataError("invalid rationality category " + std::to_string(category));
}

}  // namespace

void AnnotatedPath::validate() const {
  // State machine over the grammar. States: expecting hop start or answer
  // (Start), knowledge block after a marker (AfterRelMarker/AfterEntMarker),
  // marks inside a block (RelMarks/EntMarks), after rationality (Closed).
  enum class St { Start, AfterRelMarker, RelMarks, AfterEntMarker, EntMarks, Done };
  St st = St::Start;
  bool early_stop_pending = false;

  if (segments.empty()) throw DataError("annotated path has no segments");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const Segment& seg = segments[i];
    const bool is_last = i + 1 == segments.size();
    if (st == St::Done) {
      throw DataError("segment after the answer block");
    }
    if (early_stop_pending && !std::holds_alternative<AnswerBlock>(seg)) {
      throw DataError(
          "an Unreasonable mark must be followed by the answer block");
    }
    if (const auto* m = std::get_if<RetrievalMarker>(&seg)) {
      if (m->kind == RetrievalKind::Relation) {
        if (st != St::Start && st != St::RelMarks && st != St::EntMarks) {
          throw DataError("relation marker in the middle of a block");
        }
        // A relation block may follow entity marks only via its rationality
        // mark; EntMarks here means the mark was skipped.
        if (st == St::EntMarks) {
          throw DataError("entity block is missing its rationality mark");
        }
        st = St::AfterRelMarker;
      } else {
        if (st != St::RelMarks) {
          throw DataError("entity marker outside a relation block");
        }
        st = St::AfterEntMarker;
      }
      continue;
    }
    if (std::get_if<KnowledgeBlock>(&seg)) {
      if (st != St::AfterRelMarker && st != St::AfterEntMarker) {
        throw DataError("knowledge block without a preceding retrieval marker");
      }
      const auto& kb = std::get<KnowledgeBlock>(seg);
      if (kb.items.empty()) throw DataError("knowledge block has no items");
      st = st == St::AfterRelMarker ? St::RelMarks : St::EntMarks;
      continue;
    }
    if (const auto* rm = std::get_if<RelevanceMark>(&seg)) {
      if (st != St::RelMarks && st != St::EntMarks) {
        throw DataError("relevance mark outside a knowledge block");
      }
      relevance_name(rm->category);  // validates
      continue;
    }
    if (const auto* rt = std::get_if<RationalityMark>(&seg)) {
      if (st != St::EntMarks) {
        throw DataError("rationality mark must close an entity block");
      }
      rationality_name(rt->category);  // validates
      if (rt->category == cat::kUnreasonable) early_stop_pending = true;
      st = St::Start;
      continue;
    }
    const auto& ab = std::get<AnswerBlock>(seg);
    if (st != St::Start && st != St::RelMarks) {
      throw DataError("answer block interrupts an open entity block");
    }
    if (!is_last) throw DataError("answer block must be the final segment");
    if (ab.answers.empty()) throw DataError("answer block has no answers");
    if (ab.utility_level < 1 || ab.utility_level > 5) {
      throw DataError("utility level out of range");
    }
    st = St::Done;
  }
  if (st != St::Done) throw DataError("annotated path lacks an answer block");
}

std::string serialize(const AnnotatedPath& path) {
  path.validate();
  std::string out;
  for (const Segment& seg : path.segments) {
    if (const auto* m = std::get_if<RetrievalMarker>(&seg)) {
      out += m->kind == RetrievalKind::Relation ? kRelationMarker : kEntityMarker;
    } else if (const auto* kb = std::get_if<KnowledgeBlock>(&seg)) {
      out += kBlockOpen;
      for (std::size_t i = 0; i < kb->items.size(); ++i) {
        check_item(kb->items[i], "knowledge block");
        if (i) out += ';';
        out += kb->items[i];
      }
      out += kBlockClose;
    } else if (const auto* rm = std::get_if<RelevanceMark>(&seg)) {
      check_item(rm->item, "relevance mark");
      out += rm->item;
      if (rm->category == cat::kUnrelevant) {
        out += kBareUnrelevant;  // the corpus renders Unrelevant unwrapped
      } else {
        out += "+[" + relevance_name(rm->category) + "]+";
      }
    } else if (const auto* rt = std::get_if<RationalityMark>(&seg)) {
      out += "=[" + rationality_name(rt->category) + "]=";
    } else {
      const auto& ab = std::get<AnswerBlock>(seg);
      out += kAnswerMarker;
      for (std::size_t i = 0; i < ab.answers.size(); ++i) {
        check_item(ab.answers[i], "answer block");
        if (i) out += ';';
        out += ab.answers[i];
      }
      out += kUtilityOpen + std::to_string(ab.utility_level) + "]^";
    }
  }
  return out;
}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  AnnotatedPath run() {
    AnnotatedPath path;
    while (true) {
      const auto marker = read_marker();
      if (marker == reflect::cat::kNoRetrieval) {
        read_answer(path);
        break;
      }
      if (marker == reflect::cat::kRelationRetrieval) {
        path.segments.push_back(RetrievalMarker{RetrievalKind::Relation});
      } else {
        path.segments.push_back(RetrievalMarker{RetrievalKind::Entity});
      }
      read_block(path);
      read_marks(path);
      if (peek("=[")) read_rationality(path);
    }
    if (pos_ != text_.size()) {
      parse_fail(pos_, "trailing content after the answer block");
    }
    path.validate();
    return path;
  }

 private:
  bool peek(const char* s) const { return text_.compare(pos_, strlen_(s), s) == 0; }
  static std::size_t strlen_(const char* s) {
    std::size_t n = 0;
    while (s[n]) ++n;
    return n;
  }
  void expect(const char* s, const char* what) {
    if (!peek(s)) parse_fail(pos_, std::string("expected ") + what);
    pos_ += strlen_(s);
  }
  std::size_t find_or_end(const char* s) const {
    const auto p = text_.find(s, pos_);
    return p == std::string::npos ? text_.size() : p;
  }

  // Reads "@[...]@" and returns the retrieval category.
  int read_marker() {
    if (pos_ >= text_.size()) parse_fail(pos_, "expected a retrieval marker");
    if (text_[pos_] != '@') parse_fail(pos_, "expected '@'");
    const std::size_t close = text_.find("]@", pos_ + 1);
    if (close == std::string::npos || text_[pos_ + 1] != '[') {
      parse_fail(pos_, "unterminated retrieval marker");
    }
    const std::string surface = text_.substr(pos_ + 1, close - pos_);
    const auto tok = reflect::ReflectionToken::from_surface(surface);
    if (!tok || tok->family != reflect::TokenFamily::Retrieval) {
      parse_fail(pos_, "unknown retrieval marker '" + surface + "'");
    }
    if (tok->category == reflect::cat::kNoRetrieval) {
      // The answer reader consumes the whole "@[No Retrieval]@Answer: ".
      return tok->category;
    }
    pos_ = close + 2;
    return tok->category;
  }

  void read_block(AnnotatedPath& path) {
    expect(kBlockOpen, "'{<paragraph>'");
    const std::size_t close = text_.find(kBlockClose, pos_);
    if (close == std::string::npos) parse_fail(pos_, "unterminated knowledge block");
    KnowledgeBlock kb;
    std::size_t start = pos_;
    while (start <= close) {
      std::size_t sep = text_.find(';', start);
      if (sep == std::string::npos || sep > close) sep = close;
      if (sep == start) parse_fail(start, "empty knowledge block item");
      kb.items.push_back(text_.substr(start, sep - start));
      start = sep + 1;
      if (sep == close) break;
    }
    if (kb.items.empty()) parse_fail(pos_, "knowledge block has no items");
    path.segments.push_back(std::move(kb));
    pos_ = close + strlen_(kBlockClose);
  }

  void read_marks(AnnotatedPath& path) {
    while (true) {
      const std::size_t stop =
          std::min(find_or_end("@["), find_or_end("=["));
      const std::size_t p_plus = find_or_end("+[");
      const std::size_t p_bare = find_or_end(kBareUnrelevant);
      const std::size_t mark = std::min(p_plus, p_bare);
      if (mark >= stop) {
        if (pos_ != stop) parse_fail(pos_, "stray text before the next block");
        return;
      }
      if (mark == pos_) parse_fail(pos_, "relevance mark without an item");
      RelevanceMark rm;
      rm.item = text_.substr(pos_, mark - pos_);
      if (mark == p_plus) {
        const std::size_t close = text_.find("]+", mark + 1);
        if (close == std::string::npos) parse_fail(mark, "unterminated relevance mark");
        const std::string surface = text_.substr(mark + 1, close - mark);
        const auto tok = reflect::ReflectionToken::from_surface(surface);
        if (!tok || tok->family != reflect::TokenFamily::Relevance) {
          parse_fail(mark, "unknown relevance mark '" + surface + "'");
        }
        rm.category = tok->category;
        pos_ = close + 2;
      } else {
        rm.category = cat::kUnrelevant;
        pos_ = mark + strlen_(kBareUnrelevant);
      }
      path.segments.push_back(std::move(rm));
    }
  }

  void read_rationality(AnnotatedPath& path) {
    const std::size_t at = pos_;
    const std::size_t close = text_.find("]=", at + 1);
    if (close == std::string::npos) parse_fail(at, "unterminated rationality mark");
    const std::string surface = text_.substr(at + 1, close - at);
    const auto tok = reflect::ReflectionToken::from_surface(surface);
    if (!tok || tok->family != reflect::TokenFamily::Rationality) {
      parse_fail(at, "unknown rationality mark '" + surface + "'");
    }
    path.segments.push_back(RationalityMark{tok->category});
    pos_ = close + 2;
  }

  void read_answer(AnnotatedPath& path) {
    expect(kAnswerMarker, "'@[No Retrieval]@Answer: '");
    const std::size_t util = text_.find(kUtilityOpen, pos_);
    if (util == std::string::npos) parse_fail(pos_, "missing utility mark");
    AnswerBlock ab;
    std::size_t start = pos_;
    while (start <= util) {
      std::size_t sep = text_.find(';', start);
      if (sep == std::string::npos || sep > util) sep = util;
      if (sep == start) parse_fail(start, "empty answer");
      ab.answers.push_back(text_.substr(start, sep - start));
      start = sep + 1;
      if (sep == util) break;
    }
    pos_ = util + strlen_(kUtilityOpen);
    if (pos_ >= text_.size() || text_[pos_] < '1' || text_[pos_] > '5') {
      parse_fail(pos_, "utility level must be 1..5");
    }
    ab.utility_level = text_[pos_] - '0';
    ++pos_;
    expect("]^", "']^' closing the utility mark");
    path.segments.push_back(std::move(ab));
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

AnnotatedPath parse(const std::string& text) {
  if (text.empty()) throw DataError("parse error at byte 0: empty input");
  return Parser(text).run();
}

}  // namespace kgr::forge
