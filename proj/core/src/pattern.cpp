#include "skeltree/pattern.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace skeltree {

namespace pat {

PatternExpr empty() { return {}; }

PatternExpr sym(WedgeSymbol s) {
  PatternExpr e;
  e.op = PatternExpr::Op::Symbol;
  e.symbol = s;
  return e;
}

static PatternExpr node(PatternExpr::Op op, std::vector<PatternExpr> kids) {
  PatternExpr e;
  e.op = op;
  e.kids = std::move(kids);
  return e;
}

PatternExpr seq(std::vector<PatternExpr> kids) { return node(PatternExpr::Op::Concat, std::move(kids)); }
PatternExpr alt(std::vector<PatternExpr> kids) { return node(PatternExpr::Op::Alt, std::move(kids)); }
PatternExpr star(PatternExpr kid) { return node(PatternExpr::Op::Star, {std::move(kid)}); }
PatternExpr plus(PatternExpr kid) { return node(PatternExpr::Op::Plus, {std::move(kid)}); }
PatternExpr opt(PatternExpr kid) { return node(PatternExpr::Op::Opt, {std::move(kid)}); }

}  // namespace pat

namespace {

using pat::alt;
using pat::opt;
using pat::plus;
using pat::seq;
using pat::star;
using pat::sym;

const PatternExpr kR = sym(WedgeSymbol::InReflex);
const PatternExpr kC = sym(WedgeSymbol::InConvex);
const PatternExpr kRHat = sym(WedgeSymbol::OutReflex);
const PatternExpr kCHat = sym(WedgeSymbol::OutConvex);

std::vector<std::pair<std::string, PatternExpr>> make_builtins() {
  PatternExpr R = seq({kR, star(seq({kC, kR}))});
  PatternExpr Rp = seq({kR, plus(seq({kC, kR}))});
  PatternExpr rc_star = star(seq({opt(kR), kC}));  // (r? c)*
  PatternExpr C = seq({opt(kR), kC, rc_star, opt(kR)});
  // C restricted to length >= 2, split on which optional r is present:
  PatternExpr Cp = alt({
      seq({kR, kC, rc_star, opt(kR)}),            // leading r
      seq({kC, rc_star, kR}),                     // trailing r only
      seq({kC, plus(seq({opt(kR), kC})), opt(kR)})  // >= 2 convex symbols
  });
  PatternExpr P = pat::empty();
  PatternExpr F = seq({kC, rc_star, kC, rc_star, kC, rc_star});
  PatternExpr RcHat_plus = plus(seq({R, kCHat}));  // (R c^)+

  PatternExpr Na = seq({Cp, kCHat});
  PatternExpr Nb = seq({C, kCHat, RcHat_plus});
  PatternExpr Nd = seq({P, kCHat, RcHat_plus});
  PatternExpr Ne = seq({Rp, kRHat});
  PatternExpr Nf = seq({RcHat_plus, R, kRHat});
  PatternExpr Ng = seq({RcHat_plus, R, kCHat});
  PatternExpr Nh = F;
  PatternExpr N = alt({Na, Nb, Nd, Ne, Nf, Ng, Nh});

  return {
      {"R", R}, {"R+", Rp}, {"C", C}, {"C+", Cp}, {"P", P}, {"F", F},
      {"N_a", Na}, {"N_b", Nb}, {"N_d", Nd}, {"N_e", Ne}, {"N_f", Nf},
      {"N_g", Ng}, {"N_h", Nh}, {"N", N},
  };
}

/* Marks in `ends` every index j such that word[start..j) matches e. */
void add_matches(const PatternExpr& e, const NodeSignature& word, std::size_t start,
                 std::vector<char>& ends) {
  switch (e.op) {
    case PatternExpr::Op::Empty:
      ends[start] = 1;
      return;
    case PatternExpr::Op::Symbol:
      if (start < word.size() && word[start] == e.symbol) ends[start + 1] = 1;
      return;
    case PatternExpr::Op::Concat: {
      std::vector<char> cur(word.size() + 1, 0);
      cur[start] = 1;
      for (const PatternExpr& kid : e.kids) {
        std::vector<char> next(word.size() + 1, 0);
        for (std::size_t i = 0; i <= word.size(); ++i)
          if (cur[i]) add_matches(kid, word, i, next);
        cur = std::move(next);
      }
      for (std::size_t i = 0; i <= word.size(); ++i)
        if (cur[i]) ends[i] = 1;
      return;
    }
    case PatternExpr::Op::Alt:
      for (const PatternExpr& kid : e.kids) add_matches(kid, word, start, ends);
      return;
    case PatternExpr::Op::Star:
    case PatternExpr::Op::Plus: {
      std::vector<char> reach(word.size() + 1, 0);
      if (e.op == PatternExpr::Op::Star) reach[start] = 1;
      std::vector<char> frontier(word.size() + 1, 0);
      frontier[start] = 1;
      bool grew = true;
      while (grew) {
        grew = false;
        std::vector<char> next(word.size() + 1, 0);
        for (std::size_t i = 0; i <= word.size(); ++i)
          if (frontier[i]) add_matches(e.kids[0], word, i, next);
        frontier.assign(word.size() + 1, 0);
        for (std::size_t i = 0; i <= word.size(); ++i)
          if (next[i] && !reach[i]) {
            reach[i] = 1;
            frontier[i] = 1;
            grew = true;
          }
      }
      for (std::size_t i = 0; i <= word.size(); ++i)
        if (reach[i]) ends[i] = 1;
      return;
    }
    case PatternExpr::Op::Opt:
      ends[start] = 1;
      add_matches(e.kids[0], word, start, ends);
      return;
  }
}

NodeSignature rotated(const NodeSignature& s, std::size_t k) {
  NodeSignature out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out.push_back(s[(i + k) % s.size()]);
  return out;
}

bool is_hatted(WedgeSymbol s) { return is_outgoing(s); }

/* A rotation cut at hatted symbols: runs[i] is the (possibly empty)
 * unhatted run before hats[i]; valid only if the rotation ends hatted. */
struct RunSplit {
  std::vector<std::vector<WedgeSymbol>> runs;
  std::vector<WedgeSymbol> hats;
};

std::optional<RunSplit> split_runs(const NodeSignature& rot) {
  if (rot.empty() || !is_hatted(rot.back())) return std::nullopt;
  RunSplit out;
  std::vector<WedgeSymbol> run;
  for (WedgeSymbol s : rot) {
    if (is_hatted(s)) {
      out.runs.push_back(run);
      out.hats.push_back(s);
      run.clear();
    } else {
      run.push_back(s);
    }
  }
  return out;
}

bool run_matches(const std::string& pattern_name, const std::vector<WedgeSymbol>& run) {
  return match_linear(builtin_pattern(pattern_name), run);
}

std::optional<WedgeDecomposition> parse_variant(const std::string& variant,
                                                const NodeSignature& rot) {
  WedgeDecomposition d;
  d.variant = variant;
  if (variant == "N_h") {
    if (!rot.empty() && run_matches("F", rot)) {
      d.wedges.push_back({WedgeKind::Full, rot});
      return d;
    }
    return std::nullopt;
  }
  auto split = split_runs(rot);
  if (!split) return std::nullopt;
  const std::size_t k = split->hats.size();
  auto all_chat = [&](std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i)
      if (split->hats[i] != WedgeSymbol::OutConvex) return false;
    return true;
  };
  auto runs_are_R = [&](std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i)
      if (!run_matches("R", split->runs[i])) return false;
    return true;
  };
  if (variant == "N_a") {
    if (k != 1 || !all_chat(0, 1) || !run_matches("C+", split->runs[0]))
      return std::nullopt;
    d.wedges.push_back({WedgeKind::Convex, split->runs[0]});
  } else if (variant == "N_e") {
    if (k != 1 || split->hats[0] != WedgeSymbol::OutReflex ||
        !run_matches("R+", split->runs[0]))
      return std::nullopt;
    d.wedges.push_back({WedgeKind::Reflex, split->runs[0]});
  } else if (variant == "N_g") {
    if (k < 2 || !all_chat(0, k) || !runs_are_R(0, k)) return std::nullopt;
    for (std::size_t i = 0; i < k; ++i)
      d.wedges.push_back({WedgeKind::Reflex, split->runs[i]});
  } else if (variant == "N_f") {
    if (k < 2 || split->hats[k - 1] != WedgeSymbol::OutReflex ||
        !all_chat(0, k - 1) || !runs_are_R(0, k))
      return std::nullopt;
    for (std::size_t i = 0; i < k; ++i)
      d.wedges.push_back({WedgeKind::Reflex, split->runs[i]});
  } else if (variant == "N_b") {
    if (k < 2 || !all_chat(0, k) || !run_matches("C", split->runs[0]) ||
        !runs_are_R(1, k))
      return std::nullopt;
    d.wedges.push_back({WedgeKind::Convex, split->runs[0]});
    for (std::size_t i = 1; i < k; ++i)
      d.wedges.push_back({WedgeKind::Reflex, split->runs[i]});
  } else if (variant == "N_d") {
    if (k < 2 || !all_chat(0, k) || !split->runs[0].empty() || !runs_are_R(1, k))
      return std::nullopt;
    d.wedges.push_back({WedgeKind::Pi, {}});
    for (std::size_t i = 1; i < k; ++i)
      d.wedges.push_back({WedgeKind::Reflex, split->runs[i]});
  } else {
    return std::nullopt;
  }
  d.separators = split->hats;
  return d;
}

}  // namespace

const std::vector<std::pair<std::string, PatternExpr>>& builtin_patterns() {
  static const auto patterns = make_builtins();
  return patterns;
}

const PatternExpr& builtin_pattern(const std::string& name) {
  for (const auto& [n, p] : builtin_patterns())
    if (n == name) return p;
  throw std::invalid_argument("unknown pattern '" + name + "'");
}

bool match_linear(const PatternExpr& pattern, const NodeSignature& word) {
  std::vector<char> ends(word.size() + 1, 0);
  add_matches(pattern, word, 0, ends);
  return ends[word.size()] != 0;
}

std::optional<int> match_cyclic(const PatternExpr& pattern, const NodeSignature& signature) {
  if (signature.empty())
    return match_linear(pattern, signature) ? std::optional<int>(0) : std::nullopt;
  for (std::size_t k = 0; k < signature.size(); ++k)
    if (match_linear(pattern, rotated(signature, k))) return static_cast<int>(k);
  return std::nullopt;
}

std::optional<WedgeDecomposition> classify_signature(const NodeSignature& signature) {
  static const char* precedence[] = {"N_h", "N_a", "N_e", "N_g", "N_f", "N_b", "N_d"};
  if (signature.empty()) return std::nullopt;
  for (const char* variant : precedence) {
    for (std::size_t k = 0; k < signature.size(); ++k) {
      auto d = parse_variant(variant, rotated(signature, k));
      if (d) {
        d->rotation = static_cast<int>(k);
        return d;
      }
    }
  }
  return std::nullopt;
}

std::string to_string(const WedgeDecomposition& d) {
  auto kind_letter = [](WedgeKind k) {
    switch (k) {
      case WedgeKind::Reflex: return "R";
      case WedgeKind::Convex: return "C";
      case WedgeKind::Pi: return "P";
      case WedgeKind::Full: return "F";
    }
    return "?";
  };
  std::string out = d.variant + ":";
  for (std::size_t i = 0; i < d.wedges.size(); ++i) {
    out += " [";
    out += kind_letter(d.wedges[i].kind);
    out += ":";
    if (d.wedges[i].slice.empty()) {
      out += "\xE2\x88\x85";  // empty-set sign
    } else {
      for (std::size_t j = 0; j < d.wedges[i].slice.size(); ++j) {
        if (j) out += ' ';
        out += to_display(d.wedges[i].slice[j]);
      }
    }
    out += "]";
    if (i < d.separators.size()) out += " " + to_display(d.separators[i]);
  }
  return out;
}

}  // namespace skeltree
