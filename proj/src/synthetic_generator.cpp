#include <algorithm>
#include <array>
#include <string_view>
#include <tuple>

#include "dgr/errors.hpp"
#include "dgr/extraction.hpp"
#include "dgr/generator.hpp"

namespace dgr {

namespace {

constexpr std::array<std::string_view, 24> kQualifiers = {
    "Hierarchical", "Bio-inspired", "Self-healing", "Impact-resistant", "Adaptive",
    "Porous",       "Graded",       "Fibrous",      "Mineralized",      "Nacre-like",
    "Helicoidal",   "Sustainable",  "Resilient",    "Lightweight",      "Tough",
    "Protein-based", "Composite",   "Architected",  "Responsive",       "Biodegradable",
    "Multiscale",   "Interlocking", "Cellular",     "Crosslinked"};

constexpr std::array<std::string_view, 60> kSubjects = {
    "Materials",     "Structures",   "Fibers",        "Scaffolds",     "Coatings",
    "Polymers",      "Ceramics",     "Composites",    "Networks",      "Interfaces",
    "Lattices",      "Membranes",    "Hydrogels",     "Silk",          "Collagen",
    "Chitin",        "Keratin",      "Cellulose",     "Bone",          "Enamel",
    "Sensors",       "Actuators",    "Foams",         "Laminates",     "Textiles",
    "Adhesives",     "Crystals",     "Nanotubes",     "Graphene",      "Peptides",
    "Mechanics",     "Toughness",    "Stiffness",     "Fracture",      "Damping",
    "Design",        "Manufacturing", "Assembly",     "Modeling",      "Optimization",
    "Infrastructure", "Resilience",  "Energy",        "Transport",     "Diffusion",
    "Morphology",    "Topology",     "Hierarchy",     "Symmetry",      "Patterns",
    "Learning",      "Algorithms",   "Simulation",    "Feedback",      "Signals",
    "Proteins",      "Minerals",     "Tissues",       "Cells",         "Ecosystems"};

constexpr std::array<std::string_view, 7> kKinds = {
    "RELATES-TO", "IS-A", "INFLUENCES", "HAS", "SIMILAR-TO", "ENABLES", "PART-OF"};

constexpr std::string_view kFormattingMarker = "You are an AI that extracts information";
constexpr std::string_view kFormattingBegin = "Given the following structured text: \n";
constexpr std::string_view kFormattingEnd = "\nOutput the graph as a Python dictionary";
constexpr std::string_view kFollowupMarker = "follow-up question";

std::vector<std::string_view> split_lines(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    auto nl = s.find('\n', pos);
    if (nl == std::string_view::npos) nl = s.size();
    out.push_back(s.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return out;
}

std::size_t uniform(std::mt19937_64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace

SyntheticGenerator::SyntheticGenerator(std::uint64_t seed, std::size_t vocabulary_size)
    : rng_(seed) {
  if (vocabulary_size < 10) throw ConfigError("synthetic vocabulary size must be at least 10");
  std::size_t subjects = std::min(vocabulary_size, kSubjects.size());
  for (std::size_t s = 0; s < subjects; ++s) {
    for (auto q : kQualifiers) concept_pool_.push_back(std::string(q) + " " + std::string(kSubjects[s]));
  }
  std::shuffle(concept_pool_.begin(), concept_pool_.end(), rng_);
}

std::string SyntheticGenerator::next_concept() {
  std::size_t round = pool_cursor_ / concept_pool_.size();
  std::string name = concept_pool_[pool_cursor_ % concept_pool_.size()];
  ++pool_cursor_;
  if (round > 0) name += " Variant " + std::to_string(round + 1);
  concepts_.push_back(name);
  return name;
}

std::size_t SyntheticGenerator::pick_by_degree() {
  return endpoint_pool_[uniform(rng_, endpoint_pool_.size())];
}

std::string SyntheticGenerator::complete(const std::string& prompt) {
  std::string reply;
  if (prompt.find(kFormattingMarker) != std::string::npos) {
    auto begin = prompt.find(kFormattingBegin);
    auto end = prompt.rfind(kFormattingEnd);
    std::string_view body(prompt);
    if (begin != std::string::npos && end != std::string::npos && end >= begin) {
      begin += kFormattingBegin.size();
      body = body.substr(begin, end - begin);
    }
    KnowledgeGraph g;
    for (auto line : split_lines(body)) {
      auto a = line.find(" -- ");
      if (a == std::string_view::npos) continue;
      auto b = line.find(" -- ", a + 4);
      if (b == std::string_view::npos) continue;
      try {
        g.add_edge(line.substr(0, a), line.substr(a + 4, b - a - 4), line.substr(b + 4));
      } catch (const InvalidLabel&) {
      }
    }
    reply = to_graph_literal(g);
  } else if (prompt.find(kFollowupMarker) != std::string::npos) {
    reply = followup_reply(prompt);
  } else {
    reply = reasoning_reply(prompt);
  }
  transcript_.emplace_back(prompt, reply);
  return reply;
}

std::string SyntheticGenerator::reasoning_reply(const std::string& prompt) {
  std::vector<std::tuple<std::size_t, std::string_view, std::size_t>> edges;
  auto link = [&](std::size_t a, std::size_t b) {
    auto kind = kKinds[uniform(rng_, kKinds.size())];
    if (rng_() & 1) std::swap(a, b);
    edges.emplace_back(a, kind, b);
    endpoint_pool_.push_back(a);
    endpoint_pool_.push_back(b);
  };

  if (concepts_.empty()) {
    next_concept();
    next_concept();
    link(0, 1);
  }
  const std::size_t count = 3 + uniform(rng_, 4);
  for (std::size_t e = 0; e < count; ++e) {
    if (uniform(rng_, 100) < 55) {
      std::size_t anchor = pick_by_degree();
      next_concept();
      link(concepts_.size() - 1, anchor);
    } else {
      std::size_t a = pick_by_degree();
      std::size_t b = pick_by_degree();
      if (a == b) b = uniform(rng_, concepts_.size());
      if (a != b) link(a, b);
    }
  }

  std::string out;
  out += kThinkingOpen;
  out += "\n**Question considered:** ";
  out += prompt.substr(0, std::min<std::size_t>(prompt.size(), 160));
  out += "\n\n**Reasoning Steps:**\nRelating the concepts below by their shared mechanisms.\n\n";
  out += "**Graph:**\n";
  for (const auto& [a, kind, b] : edges) {
    out += concepts_[a] + " -- " + std::string(kind) + " -- " + concepts_[b] + "\n";
  }
  out += "\n**Summary:**\nThe relations above extend the existing concept network.\n";
  out += kThinkingClose;
  out += "\nThe concepts combine into a coherent design direction.";
  return out;
}

std::string SyntheticGenerator::followup_reply(const std::string& prompt) {
  std::vector<std::string_view> keywords;
  bool in_list = false;
  for (auto line : split_lines(prompt)) {
    if (line.starts_with("Original list of")) {
      in_list = true;
      continue;
    }
    if (line.starts_with("Reply only")) break;
    if (in_list && !line.empty() && line.find(" -- ") == std::string_view::npos) {
      keywords.push_back(line);
    }
  }
  std::string keyword = keywords.empty() ? std::string("bio-inspired materials")
                                         : std::string(keywords[uniform(rng_, keywords.size())]);
  std::string other = concepts_.empty() ? std::string("hierarchical structures")
                                        : concepts_[uniform(rng_, concepts_.size())];
  return "How could " + keyword + " inform new approaches to " + other + "?";
}

}  // namespace dgr
