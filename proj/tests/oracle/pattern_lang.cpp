#include "pattern_lang.hpp"

#include <map>
#include <stdexcept>
#include <vector>

namespace oracle {

namespace {

Lang word(const std::string& w) { return {w}; }

Lang cat(const Lang& a, const Lang& b, std::size_t maxlen) {
  Lang out;
  for (const auto& x : a)
    for (const auto& y : b)
      if (x.size() + y.size() <= maxlen) out.insert(x + y);
  return out;
}

Lang catv(const std::vector<Lang>& parts, std::size_t maxlen) {
  Lang out = {""};
  for (const Lang& p : parts) out = cat(out, p, maxlen);
  return out;
}

Lang alt(const Lang& a, const Lang& b) {
  Lang out = a;
  out.insert(b.begin(), b.end());
  return out;
}

Lang opt(const Lang& a) { return alt(a, {""}); }

Lang star(const Lang& a, std::size_t maxlen) {
  Lang out = {""};
  Lang frontier = {""};
  while (!frontier.empty()) {
    Lang grown = cat(frontier, a, maxlen);
    frontier.clear();
    for (const auto& w : grown)
      if (out.insert(w).second) frontier.insert(w);
  }
  return out;
}

Lang plus(const Lang& a, std::size_t maxlen) { return cat(a, star(a, maxlen), maxlen); }

Lang filter_min_len(const Lang& a, std::size_t minlen) {
  Lang out;
  for (const auto& w : a)
    if (w.size() >= minlen) out.insert(w);
  return out;
}

Lang build(const std::string& name, std::size_t maxlen) {
  const Lang r = word("r"), c = word("c"), Rh = word("R"), Ch = word("C");
  const std::size_t m = maxlen;
  const Lang cr_star = star(cat(c, r, m), m);
  const Lang rc_opt = cat(opt(r), c, m);  // r? c

  if (name == "R") return catv({r, cr_star}, m);
  if (name == "R+") return catv({r, plus(cat(c, r, m), m)}, m);
  if (name == "C") return catv({opt(r), c, star(rc_opt, m), opt(r)}, m);
  if (name == "C+") return filter_min_len(build("C", m), 2);
  if (name == "P") return {""};
  if (name == "F")
    return catv({c, star(rc_opt, m), c, star(rc_opt, m), c, star(rc_opt, m)}, m);

  const Lang RChat_plus = plus(cat(build("R", m), Ch, m), m);
  if (name == "N_a") return cat(build("C+", m), Ch, m);
  if (name == "N_b") return catv({build("C", m), Ch, RChat_plus}, m);
  if (name == "N_d") return catv({build("P", m), Ch, RChat_plus}, m);
  if (name == "N_e") return cat(build("R+", m), Rh, m);
  if (name == "N_f") return catv({RChat_plus, build("R", m), Rh}, m);
  if (name == "N_g") return catv({RChat_plus, build("R", m), Ch}, m);
  if (name == "N_h") return build("F", m);
  if (name == "N") {
    Lang out;
    for (const char* v : {"N_a", "N_b", "N_d", "N_e", "N_f", "N_g", "N_h"})
      out = alt(out, build(v, m));
    return out;
  }
  throw std::invalid_argument("unknown language '" + name + "'");
}

}  // namespace

const Lang& expand(const std::string& name, std::size_t maxlen) {
  static std::map<std::pair<std::string, std::size_t>, Lang> cache;
  auto key = std::make_pair(name, maxlen);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build(name, maxlen)).first;
  return it->second;
}

bool linear_member(const std::string& name, const std::string& word) {
  return expand(name, word.size()).count(word) != 0;
}

int cyclic_offset(const std::string& name, const std::string& word) {
  if (word.empty()) return linear_member(name, word) ? 0 : -1;
  for (std::size_t k = 0; k < word.size(); ++k) {
    std::string rot = word.substr(k) + word.substr(0, k);
    if (linear_member(name, rot)) return static_cast<int>(k);
  }
  return -1;
}

Classified classify(const std::string& word) {
  for (const char* v : {"N_h", "N_a", "N_e", "N_g", "N_f", "N_b", "N_d"}) {
    int off = cyclic_offset(v, word);
    if (off >= 0) return {v, off};
  }
  return {};
}

}  // namespace oracle
