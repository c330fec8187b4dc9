#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "sppfix/clean.hpp"
#include "sppfix/parser.hpp"
#include "sppfix/system.hpp"

namespace sppfix {

// ---------------------------------------------------------------------------
// Back-button surfing model: from page A follow a link to B with probability
// l_AB or pop back with probability b_A > 0; the revocation probabilities
// solve X_A = b_A + sum_B l_AB * X_B * X_A.

struct BackButtonModel {
  std::vector<std::string> pages;
  std::map<std::string, Rational> back_prob;
  std::map<std::string, std::map<std::string, Rational>> links;  // from -> (to -> prob)

  void validate() const {
    std::set<std::string> known(pages.begin(), pages.end());
    if (known.size() != pages.size()) raise(errc::invalid_argument, "duplicate page name");
    for (const auto& page : pages) {
      auto it = back_prob.find(page);
      if (it == back_prob.end() || !(it->second > 0))
        raise(errc::probability_mass_mismatch, "page '" + page + "' needs back probability > 0");
      Rational mass = it->second;
      auto row = links.find(page);
      if (row != links.end())
        for (auto& [to, p] : row->second) {
          if (!known.count(to)) raise(errc::unknown_variable, "link target '" + to + "' is not a page");
          if (p < 0) raise(errc::negative_coefficient, "negative link probability");
          mass += p;
        }
      if (mass != 1)
        raise(errc::probability_mass_mismatch,
              "probabilities of page '" + page + "' sum to " + fraction_string(mass) + ", not 1");
    }
    for (auto& [from, row] : links) {
      (void)row;
      if (!known.count(from)) raise(errc::unknown_variable, "link source '" + from + "' is not a page");
    }
  }
};

namespace frontend_detail {

inline bool valid_identifier(const std::string& s) {
  if (s.empty() || !parser_detail::ident_start(s[0])) return false;
  for (char c : s)
    if (!parser_detail::ident_char(c)) return false;
  return true;
}

// Page "1" becomes variable X1; names that already are identifiers pass
// through; remaining collisions fall back to positional names.
inline std::vector<std::string> page_variable_names(const std::vector<std::string>& pages) {
  std::vector<std::string> names;
  std::set<std::string> used;
  for (size_t i = 0; i < pages.size(); ++i) {
    std::string name;
    if (valid_identifier(pages[i]))
      name = pages[i];
    else if (valid_identifier("X" + pages[i]))
      name = "X" + pages[i];
    if (name.empty() || used.count(name)) name = "P" + std::to_string(i);
    while (used.count(name)) name += "_";
    used.insert(name);
    names.push_back(name);
  }
  return names;
}

}  // namespace frontend_detail

inline SppSystem back_button_to_spp(const BackButtonModel& model) {
  model.validate();
  SppSystem sys;
  sys.variables = frontend_detail::page_variable_names(model.pages);
  std::map<std::string, int> index;
  for (size_t i = 0; i < model.pages.size(); ++i) index[model.pages[i]] = static_cast<int>(i);
  for (size_t i = 0; i < model.pages.size(); ++i) {
    Polynomial eq;
    eq.add_constant(model.back_prob.at(model.pages[i]));
    auto row = model.links.find(model.pages[i]);
    if (row != model.links.end())
      for (auto& [to, p] : row->second) {
        if (p == 0) continue;
        int b = index.at(to);
        std::map<int, int> powers;
        powers[static_cast<int>(i)] += 1;
        powers[b] += 1;  // squares X_A when A links to itself
        eq.add_term(p, std::move(powers));
      }
    sys.equations.push_back(std::move(eq));
  }
  return sys;
}

// ---------------------------------------------------------------------------
// Probabilistic pushdown automata. Rules (p, X) -> (q, alpha) with |alpha|<=2;
// the termination probabilities [pXq] (reach q with the stack emptied) solve
// one quadratic equation per state-symbol-state triple.

struct PpdaRule {
  std::string from_state;
  std::string symbol;
  std::string to_state;
  std::vector<std::string> push;  // 0, 1 or 2 symbols; push[0] ends on top
  Rational prob;
};

struct Ppda {
  std::vector<std::string> states;
  std::vector<std::string> alphabet;
  std::vector<PpdaRule> rules;

  void validate() const {
    std::set<std::string> st(states.begin(), states.end());
    std::set<std::string> al(alphabet.begin(), alphabet.end());
    if (st.size() != states.size() || al.size() != alphabet.size())
      raise(errc::invalid_argument, "duplicate state or symbol");
    std::map<std::pair<std::string, std::string>, Rational> mass;
    for (const auto& r : rules) {
      if (r.push.size() > 2) raise(errc::invalid_rule, "rule pushes more than two symbols");
      if (!(r.prob > 0) || r.prob > 1)
        raise(errc::invalid_rule, "rule probability must be in (0, 1]");
      if (!st.count(r.from_state) || !st.count(r.to_state))
        raise(errc::invalid_rule, "rule references an unknown state");
      if (!al.count(r.symbol)) raise(errc::invalid_rule, "rule references an unknown symbol");
      for (const auto& s : r.push)
        if (!al.count(s)) raise(errc::invalid_rule, "rule pushes an unknown symbol");
      mass[{r.from_state, r.symbol}] += r.prob;
    }
    for (auto& [key, total] : mass)
      if (total != 1)
        raise(errc::probability_mass_mismatch, "rules for (" + key.first + ", " + key.second +
                                                   ") sum to " + fraction_string(total));
  }
};

struct PpdaLegendEntry {
  std::string variable;
  std::string from_state, symbol, to_state;
  bool removed = false;  // dropped by cleaning (unreachable triple)
};

struct PpdaTranslation {
  SppSystem system;  // cleaned
  std::vector<PpdaLegendEntry> legend;
};

inline PpdaTranslation ppda_to_spp(const Ppda& ppda) {
  ppda.validate();
  SppSystem full;
  std::vector<PpdaLegendEntry> legend;
  std::map<std::tuple<std::string, std::string, std::string>, int> index;
  std::set<std::string> used;
  for (const auto& p : ppda.states)
    for (const auto& X : ppda.alphabet)
      for (const auto& q : ppda.states) {
        std::string name = p + "_" + X + "_" + q;
        while (used.count(name) || !frontend_detail::valid_identifier(name))
          name = "V" + std::to_string(full.variables.size()) + "_" + name;
        used.insert(name);
        index[{p, X, q}] = static_cast<int>(full.variables.size());
        full.variables.push_back(name);
        legend.push_back(PpdaLegendEntry{name, p, X, q, false});
        full.equations.emplace_back();
      }

  for (const auto& r : ppda.rules) {
    if (r.push.empty()) {
      // pop: contributes prob to [p X q] with q = target state
      int var = index.at({r.from_state, r.symbol, r.to_state});
      full.equations[static_cast<size_t>(var)].add_constant(r.prob);
    } else if (r.push.size() == 1) {
      // [p X q] += prob * [r Y q] for every q
      for (const auto& q : ppda.states) {
        int var = index.at({r.from_state, r.symbol, q});
        int ref = index.at({r.to_state, r.push[0], q});
        std::map<int, int> powers;
        powers[ref] += 1;
        full.equations[static_cast<size_t>(var)].add_term(r.prob, std::move(powers));
      }
    } else {
      // [p X q] += prob * sum_t [r Y t] * [t Z q]
      for (const auto& q : ppda.states)
        for (const auto& t : ppda.states) {
          int var = index.at({r.from_state, r.symbol, q});
          int first = index.at({r.to_state, r.push[0], t});
          int second = index.at({t, r.push[1], q});
          std::map<int, int> powers;
          powers[first] += 1;
          powers[second] += 1;  // merges into a square when first == second
          full.equations[static_cast<size_t>(var)].add_term(r.prob, std::move(powers));
        }
    }
  }

  auto cleaned = clean(full);
  for (int removed : cleaned.removed_indices) legend[static_cast<size_t>(removed)].removed = true;
  return PpdaTranslation{std::move(cleaned.system), std::move(legend)};
}

// A pPDA is strict when every (p, X) pair that has rules can pop to every
// state directly. The definition quantifies pop targets over all states; for
// multi-state automata this is the strictest reading (see the doc notes).
inline bool is_strict(const Ppda& ppda) {
  std::set<std::pair<std::string, std::string>> with_rules;
  std::set<std::tuple<std::string, std::string, std::string>> pops;
  for (const auto& r : ppda.rules) {
    with_rules.insert({r.from_state, r.symbol});
    if (r.push.empty() && r.prob > 0) pops.insert({r.from_state, r.symbol, r.to_state});
  }
  for (const auto& [p, X] : with_rules)
    for (const auto& q : ppda.states)
      if (!pops.count({p, X, q})) return false;
  return true;
}

}  // namespace sppfix
