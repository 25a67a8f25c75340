#include "dgr/extraction.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>

#include "dgr/errors.hpp"

namespace dgr {

ReasoningBlock isolate_reasoning(std::string_view response) {
  ReasoningBlock block;
  auto open = response.find(kThinkingOpen);
  if (open == std::string_view::npos) {
    block.text = std::string(response);
    block.degraded = true;
    return block;
  }
  auto begin = open + kThinkingOpen.size();
  auto close = response.find(kThinkingClose, begin);
  if (close == std::string_view::npos) {
    block.text = std::string(response.substr(begin));
    block.unterminated = true;
    return block;
  }
  block.text = std::string(response.substr(begin, close - begin));
  return block;
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// A heading is a short line that is either markdown-decorated ("#", "**")
// or ends with a colon and carries nothing after it.
std::optional<std::string> heading_text(std::string_view line) {
  auto first = line.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return std::nullopt;
  line.remove_prefix(first);
  while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
  bool decorated = line.starts_with('#') || line.starts_with("**");
  std::string stripped;
  for (char c : line) {
    if (c != '#' && c != '*' && c != '_') stripped.push_back(c);
  }
  auto a = stripped.find_first_not_of(' ');
  if (a == std::string::npos) return std::nullopt;
  stripped = stripped.substr(a);
  bool colon = !stripped.empty() && stripped.back() == ':';
  if (colon) stripped.pop_back();
  if (!(decorated || colon) || stripped.size() > 40) return std::nullopt;
  if (!decorated && stripped.find(':') != std::string::npos) return std::nullopt;
  return lower(stripped);
}

}  // namespace

std::string graph_section(std::string_view reasoning) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= reasoning.size()) {
    auto nl = reasoning.find('\n', pos);
    if (nl == std::string_view::npos) nl = reasoning.size();
    lines.push_back(reasoning.substr(pos, nl - pos));
    pos = nl + 1;
  }
  std::optional<std::size_t> start;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto h = heading_text(lines[i]);
    if (h && h->find("graph") != std::string::npos) {
      start = i + 1;
      break;
    }
  }
  if (!start) return std::string(reasoning);
  std::string out;
  for (std::size_t i = *start; i < lines.size(); ++i) {
    if (heading_text(lines[i])) break;
    out.append(lines[i]);
    out.push_back('\n');
  }
  return out;
}

// ---------------------------------------------------------------------------
// Literal parsing

namespace {

constexpr std::size_t kMaxDepth = 64;

struct Value {
  enum class Kind { Map, List, String, Scalar };
  Kind kind = Kind::Scalar;
  std::string text;  // String / Scalar
  std::vector<std::pair<Value, Value>> entries;
  std::vector<Value> items;
};

class LiteralParser {
 public:
  LiteralParser(std::string_view text, std::size_t base) : s_(text), base_(base) {}

  Value parse_document() {
    Value v = parse_value(0);
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters after literal");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw MalformedLiteral(what, base_ + pos_); }

  void skip_ws() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {  // Python comment
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Value parse_value(std::size_t depth) {
    if (depth > kMaxDepth) fail("literal nested too deeply");
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of literal");
    char c = s_[pos_];
    if (c == '{') return parse_map(depth);
    if (c == '[' || c == '(') return parse_list(depth);
    if (c == '"' || c == '\'') return parse_string();
    return parse_scalar();
  }

  Value parse_map(std::size_t depth) {
    Value v;
    v.kind = Value::Kind::Map;
    ++pos_;  // '{'
    while (true) {
      if (eat('}')) return v;
      Value key = parse_value(depth + 1);
      if (!eat(':')) fail("expected ':' in map");
      Value val = parse_value(depth + 1);
      v.entries.emplace_back(std::move(key), std::move(val));
      if (eat(',')) continue;
      if (eat('}')) return v;
      fail("expected ',' or '}' in map");
    }
  }

  Value parse_list(std::size_t depth) {
    Value v;
    v.kind = Value::Kind::List;
    char close = s_[pos_] == '[' ? ']' : ')';
    ++pos_;
    while (true) {
      if (eat(close)) return v;
      v.items.push_back(parse_value(depth + 1));
      if (eat(',')) continue;
      if (eat(close)) return v;
      fail("expected ',' or closing bracket in list");
    }
  }

  static void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }

  std::uint32_t parse_hex(std::size_t digits) {
    if (pos_ + digits > s_.size()) fail("truncated escape");
    std::uint32_t cp = 0;
    for (std::size_t i = 0; i < digits; ++i) {
      char h = s_[pos_++];
      cp <<= 4;
      if (h >= '0' && h <= '9') cp |= static_cast<std::uint32_t>(h - '0');
      else if (h >= 'a' && h <= 'f') cp |= static_cast<std::uint32_t>(h - 'a' + 10);
      else if (h >= 'A' && h <= 'F') cp |= static_cast<std::uint32_t>(h - 'A' + 10);
      else fail("bad hex digit in escape");
    }
    return cp;
  }

  Value parse_string() {
    Value v;
    v.kind = Value::Kind::String;
    char quote = s_[pos_++];
    while (true) {
      if (pos_ >= s_.size()) fail("unterminated string");
      char c = s_[pos_++];
      if (c == quote) break;
      if (c == '\n') fail("newline inside string");
      if (c != '\\') {
        v.text.push_back(c);
        continue;
      }
      if (pos_ >= s_.size()) fail("unterminated escape");
      char e = s_[pos_++];
      switch (e) {
        case 'n': v.text.push_back('\n'); break;
        case 't': v.text.push_back('\t'); break;
        case 'r': v.text.push_back('\r'); break;
        case '0': v.text.push_back('\0'); break;
        case '\\': v.text.push_back('\\'); break;
        case '\'': v.text.push_back('\''); break;
        case '"': v.text.push_back('"'); break;
        case '\n': break;  // line continuation
        case 'x': v.text.push_back(static_cast<char>(parse_hex(2))); break;
        case 'u': append_utf8(v.text, parse_hex(4)); break;
        case 'U': {
          auto cp = parse_hex(8);
          if (cp > 0x10FFFF) fail("escape out of unicode range");
          append_utf8(v.text, cp);
          break;
        }
        default:
          // Python keeps unknown escapes verbatim.
          v.text.push_back('\\');
          v.text.push_back(e);
      }
    }
    // Adjacent literals concatenate, as in Python.
    skip_ws();
    if (pos_ < s_.size() && (s_[pos_] == '"' || s_[pos_] == '\'')) {
      Value next = parse_string();
      v.text += next.text;
    }
    return v;
  }

  Value parse_scalar() {
    Value v;
    std::size_t start = pos_;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+' ||
          c == '_') {
        ++pos_;
      } else {
        break;
      }
    }
    if (pos_ == start) fail(std::string("unexpected character '") + s_[pos_] + "'");
    v.text = std::string(s_.substr(start, pos_ - start));
    return v;
  }

  std::string_view s_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

// End offset (exclusive) of the brace block starting at `open`, honouring
// quoted strings. npos if it never balances.
std::size_t balanced_end(std::string_view text, std::size_t open) {
  std::size_t depth = 0;
  char quote = 0;
  for (std::size_t i = open; i < text.size(); ++i) {
    char c = text[i];
    if (quote) {
      if (c == '\\') ++i;
      else if (c == quote) quote = 0;
      continue;
    }
    if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string_view::npos;
}

std::optional<ConceptLabel> label_of(const Value& v) {
  if (v.kind != Value::Kind::String && v.kind != Value::Kind::Scalar) return std::nullopt;
  try {
    return normalize_label(v.text);
  } catch (const InvalidLabel&) {
    return std::nullopt;
  }
}

// Relation kinds carried by an inner value; empty means "tag missing".
std::vector<std::string> relation_kinds(const Value& attrs) {
  std::vector<std::string> kinds;
  auto collect = [&](const Value& tag) {
    if (tag.kind == Value::Kind::String || tag.kind == Value::Kind::Scalar) {
      kinds.push_back(tag.text);
    } else if (tag.kind == Value::Kind::List) {
      for (const auto& item : tag.items) {
        if (item.kind == Value::Kind::String || item.kind == Value::Kind::Scalar) {
          kinds.push_back(item.text);
        }
      }
    }
  };
  if (attrs.kind == Value::Kind::Map) {
    for (const auto& [k, v] : attrs.entries) {
      if (k.kind == Value::Kind::String && lower(k.text) == "relation") collect(v);
    }
  } else if (attrs.kind == Value::Kind::String) {
    collect(attrs);
  }
  return kinds;
}

}  // namespace

LocalGraph parse_graph_literal(std::string_view text) {
  auto open = text.find('{');
  if (open == std::string_view::npos) throw NoGraphFound("no '{' in generator reply");
  auto end = balanced_end(text, open);
  if (end == std::string_view::npos) throw MalformedLiteral("unbalanced braces", open);

  LiteralParser parser(text.substr(open, end - open), open);
  Value root = parser.parse_document();

  LocalGraph local;
  local.span_begin = open;
  local.span_end = end;
  for (const auto& [src_val, targets] : root.entries) {
    auto source = label_of(src_val);
    if (!source) {
      ++local.dropped_entries;
      continue;
    }
    if (targets.kind != Value::Kind::Map) {
      throw MalformedLiteral("adjacency of '" + source->display + "' is not a map", open);
    }
    local.graph.add_node(*source);
    for (const auto& [tgt_val, attrs] : targets.entries) {
      auto target = label_of(tgt_val);
      if (!target) {
        ++local.dropped_entries;
        continue;
      }
      bool added = false;
      for (const auto& kind : relation_kinds(attrs)) {
        try {
          local.graph.add_edge(*source, kind, *target);
          added = true;
        } catch (const InvalidLabel&) {
        }
      }
      if (!added) {
        local.graph.add_edge(*source, kDefaultRelation, *target);
        ++local.defaulted_relations;
      }
    }
  }
  return local;
}

namespace {

std::string quote(std::string_view s) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out = "\"";
  for (char c : s) {
    auto u = static_cast<unsigned char>(c);
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (u < 0x20 || u == 0x7F) {
          out += "\\x";
          out.push_back(kHex[u >> 4]);
          out.push_back(kHex[u & 0xF]);
        } else {
          out.push_back(c);
        }
    }
  }
  out += '"';
  return out;
}

}  // namespace

std::string to_graph_literal(const KnowledgeGraph& g) {
  // source key -> target key -> kinds
  std::map<std::string, std::map<std::string, std::vector<std::string>>> adjacency;
  for (const auto& [key, _] : g.nodes()) adjacency[key];
  for (const auto& r : g.edges()) adjacency[r.source][r.target].push_back(r.kind);

  std::set<std::string> targets_only;
  for (const auto& r : g.edges()) targets_only.insert(r.target);

  std::string out = "{\n";
  bool first_source = true;
  for (const auto& [src, targets] : adjacency) {
    // Nodes reached as targets need no entry of their own.
    if (targets.empty() && targets_only.contains(src)) continue;
    if (!first_source) out += ",\n";
    first_source = false;
    out += "    " + quote(g.display(src)) + ": {";
    bool first_target = true;
    for (const auto& [tgt, kinds] : targets) {
      if (!first_target) out += ", ";
      first_target = false;
      out += quote(g.display(tgt)) + ": {\"relation\": ";
      if (kinds.size() == 1) {
        out += quote(kinds.front());
      } else {
        out += "[";
        for (std::size_t i = 0; i < kinds.size(); ++i) {
          if (i) out += ", ";
          out += quote(kinds[i]);
        }
        out += "]";
      }
      out += "}";
    }
    out += "}";
  }
  out += first_source ? "}" : "\n}";
  return out;
}

std::string formatting_prompt(std::string_view raw_graph) {
  std::string p =
      "You are an AI that extracts information from structured text and outputs a graph in "
      "Python dictionary format compatible with NetworkX. \n"
      "Given the following structured text: \n";
  p.append(raw_graph);
  p +=
      "\nOutput the graph as a Python dictionary without any additional text or explanations. "
      "Ensure the dictionary is properly formatted for immediate evaluation in Python.";
  return p;
}

ExtractionOutcome extract_with_retry(Generator& gen, std::string_view raw_reasoning,
                                     std::size_t max_retries) {
  ExtractionOutcome outcome;
  const std::string base = formatting_prompt(raw_reasoning);
  std::string prompt = base;
  for (std::size_t attempt = 0; attempt <= max_retries; ++attempt) {
    std::string reply = gen.complete(prompt);
    try {
      outcome.local = parse_graph_literal(reply);
      outcome.retries_used = attempt;
      return outcome;
    } catch (const NoGraphFound& e) {
      outcome.errors.emplace_back(e.what());
    } catch (const MalformedLiteral& e) {
      outcome.errors.emplace_back(e.what());
    }
    prompt = base + "\nThe previous reply could not be parsed (" + outcome.errors.back() +
             "). Reply with the dictionary only.";
  }
  outcome.retries_used = max_retries;
  outcome.skipped = true;
  outcome.local = LocalGraph{};
  return outcome;
}

}  // namespace dgr
