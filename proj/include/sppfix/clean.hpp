#pragma once

#include <map>
#include <string>
#include <vector>

#include "sppfix/system.hpp"

namespace sppfix {

// Boolean abstraction of one fixed-point iteration step: a component becomes
// reachable once some term of its equation has all variables reachable.
inline std::vector<bool> boolean_kleene(const SppSystem& sys, int steps) {
  std::vector<bool> reach(sys.size(), false);
  for (int k = 0; k < steps; ++k) {
    std::vector<bool> next(sys.size(), false);
    for (size_t i = 0; i < sys.size(); ++i) {
      const Polynomial& eq = sys.equations[i];
      bool on = eq.constant > 0;
      for (const auto& m : eq.monomials) {
        if (on) break;
        bool all = true;
        for (auto& [v, e] : m.powers) all = all && reach[static_cast<size_t>(v)];
        on = all;
      }
      next[i] = on;
    }
    reach.swap(next);
  }
  return reach;
}

struct CleanResult {
  SppSystem system;
  std::vector<std::string> removed;       // names, in original order
  std::vector<int> removed_indices;       // indices into the input system
  std::vector<int> surviving_indices;     // indices into the input system
};

// Removes every component that stays at zero under n iteration steps from
// zero (those stay at zero forever), and erases their occurrences from the
// surviving equations.
inline CleanResult clean(const SppSystem& sys) {
  auto reach = boolean_kleene(sys, static_cast<int>(sys.size()));
  CleanResult out;
  std::map<int, int> remap;
  std::map<int, Rational> zeros;
  for (size_t i = 0; i < sys.size(); ++i) {
    if (reach[i]) {
      remap[static_cast<int>(i)] = static_cast<int>(out.system.variables.size());
      out.system.variables.push_back(sys.variables[i]);
      out.surviving_indices.push_back(static_cast<int>(i));
    } else {
      out.removed.push_back(sys.variables[i]);
      out.removed_indices.push_back(static_cast<int>(i));
      zeros[static_cast<int>(i)] = Rational(0);
    }
  }
  for (size_t i = 0; i < sys.size(); ++i) {
    if (!reach[i]) continue;
    out.system.equations.push_back(sys.equations[i].substitute(zeros).remap(remap));
  }
  return out;
}

inline bool is_clean(const SppSystem& sys) {
  auto reach = boolean_kleene(sys, static_cast<int>(sys.size()));
  for (bool b : reach)
    if (!b) return false;
  return true;
}

inline void require_clean(const SppSystem& sys, const char* op) {
  if (!is_clean(sys))
    raise(errc::not_clean, std::string(op) + " requires a clean system; run clean() first");
}

}  // namespace sppfix
