#pragma once

#include <string>

#include <json.hpp>

#include "sppfix/certify.hpp"
#include "sppfix/frontends.hpp"
#include "sppfix/iterate.hpp"
#include "sppfix/system.hpp"

namespace sppfix {

// All JSON output goes through ordered_json so key order, and therefore the
// byte stream, is stable across runs.
using Json = nlohmann::ordered_json;

// ----- equation systems -----------------------------------------------------
// {"variables": [...], "equations": [[{"coeff": "3/10", "powers": {"X1": 1}}, ...], ...]}
// A term with empty powers is a constant; coefficients accept "p/q" or
// decimal strings.

inline Json system_to_json(const SppSystem& sys) {
  Json j;
  j["variables"] = sys.variables;
  Json eqs = Json::array();
  for (const auto& eq : sys.equations) {
    Json terms = Json::array();
    for (const auto& m : eq.monomials) {
      Json term;
      term["coeff"] = fraction_string(m.coeff);
      Json powers = Json::object();
      for (auto& [v, e] : m.powers) powers[sys.variables[static_cast<size_t>(v)]] = e;
      term["powers"] = powers;
      terms.push_back(term);
    }
    if (eq.constant != 0 || eq.monomials.empty()) {
      Json term;
      term["coeff"] = fraction_string(eq.constant);
      term["powers"] = Json::object();
      terms.push_back(term);
    }
    eqs.push_back(terms);
  }
  j["equations"] = eqs;
  return j;
}

inline SppSystem system_from_json(const Json& j) {
  if (!j.contains("variables") || !j.contains("equations"))
    raise(errc::syntax_error, "system JSON needs 'variables' and 'equations'");
  SppSystem sys;
  for (const auto& v : j.at("variables")) sys.variables.push_back(v.get<std::string>());
  std::map<std::string, int> index;
  for (size_t i = 0; i < sys.variables.size(); ++i)
    index[sys.variables[i]] = static_cast<int>(i);
  for (const auto& eq_terms : j.at("equations")) {
    Polynomial eq;
    for (const auto& term : eq_terms) {
      Rational coeff = parse_rational_literal(term.at("coeff").get<std::string>());
      std::map<int, int> powers;
      for (auto it = term.at("powers").begin(); it != term.at("powers").end(); ++it) {
        auto found = index.find(it.key());
        if (found == index.end())
          raise(errc::unknown_variable, "term references unknown variable '" + it.key() + "'");
        powers[found->second] = it.value().get<int>();
      }
      if (powers.empty())
        eq.add_constant(coeff);
      else
        eq.add_term(coeff, std::move(powers));
    }
    sys.equations.push_back(std::move(eq));
  }
  sys.validate();
  return sys;
}

// ----- stochastic model files ------------------------------------------------

inline BackButtonModel back_button_from_json(const Json& j) {
  BackButtonModel model;
  for (const auto& p : j.at("pages")) model.pages.push_back(p.get<std::string>());
  for (auto it = j.at("back").begin(); it != j.at("back").end(); ++it)
    model.back_prob[it.key()] = parse_rational_literal(it.value().get<std::string>());
  if (j.contains("links"))
    for (auto from = j.at("links").begin(); from != j.at("links").end(); ++from)
      for (auto to = from.value().begin(); to != from.value().end(); ++to)
        model.links[from.key()][to.key()] = parse_rational_literal(to.value().get<std::string>());
  return model;
}

// Stack strings in rule targets are split per character, so symbols must be
// single characters.
inline Ppda ppda_from_json(const Json& j) {
  Ppda ppda;
  for (const auto& s : j.at("states")) ppda.states.push_back(s.get<std::string>());
  for (const auto& s : j.at("alphabet")) {
    auto sym = s.get<std::string>();
    if (sym.size() != 1)
      raise(errc::invalid_rule, "stack symbols must be single characters, got '" + sym + "'");
    ppda.alphabet.push_back(sym);
  }
  for (const auto& r : j.at("rules")) {
    PpdaRule rule;
    rule.from_state = r.at("from").at(0).get<std::string>();
    rule.symbol = r.at("from").at(1).get<std::string>();
    rule.to_state = r.at("to").at(0).get<std::string>();
    for (char c : r.at("to").at(1).get<std::string>()) rule.push.push_back(std::string(1, c));
    rule.prob = parse_rational_literal(r.at("prob").get<std::string>());
    ppda.rules.push_back(std::move(rule));
  }
  return ppda;
}

enum class ModelKind { system, back_button, ppda };

inline ModelKind detect_model_kind(const Json& j) {
  if (j.contains("pages")) return ModelKind::back_button;
  if (j.contains("states")) return ModelKind::ppda;
  if (j.contains("variables")) return ModelKind::system;
  raise(errc::syntax_error, "JSON file is neither a system nor a known model");
}

// ----- certificates and traces ------------------------------------------------

template <class S>
Json certificate_to_json(const Certificate<S>& cert) {
  Json j;
  Json lower = Json::array(), upper = Json::array();
  for (const auto& v : cert.lower) lower.push_back(scalar_traits<S>::print(v));
  for (const auto& v : cert.upper) upper.push_back(scalar_traits<S>::print(v));
  j["lower"] = lower;
  j["upper"] = upper;
  j["bits"] = cert.certified_bits;
  j["justification"] = justification_name(cert.justification);
  Json params;
  params["c_min"] = fraction_string(cert.params.c_min);
  params["nu_min"] = fraction_string(cert.params.nu_min);
  params["n"] = cert.params.n;
  params["step_diff"] = fraction_string(cert.params.step_diff);
  j["params"] = params;
  return j;
}

template <class S>
Json trace_to_json(const IterationTrace<S>& trace) {
  Json j;
  j["method"] = method_name(trace.method);
  Json iterates = Json::array();
  for (const auto& x : trace.iterates) {
    Json row = Json::array();
    for (const auto& v : x) row.push_back(scalar_traits<S>::print(v));
    iterates.push_back(row);
  }
  j["iterates"] = iterates;
  Json residuals = Json::array();
  for (const auto& r : trace.residuals) residuals.push_back(scalar_traits<S>::print(r));
  j["residuals"] = residuals;
  Json notes = Json::array();
  for (const auto& n : trace.solver_notes) {
    Json note;
    note["min_pivot"] = n.min_pivot;
    note["max_pivot"] = n.max_pivot;
    notes.push_back(note);
  }
  j["solver_notes"] = notes;
  return j;
}

}  // namespace sppfix
