#pragma once

/// \file cnf.hpp
/// Propositional formulas in conjunctive normal form, DIMACS output and
/// parsing of SAT-competition style solver output.

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gsynth {

using Variable = std::uint32_t;

class Literal {
 public:
  constexpr Literal() = default;

  constexpr Literal(Variable var, bool positive) : var_(var), positive_(positive) {
    if (var == 0) {
      throw std::domain_error("literal variable ids start at 1");
    }
  }

  static constexpr Literal pos(Variable var) { return {var, true}; }
  static constexpr Literal neg(Variable var) { return {var, false}; }

  /// From a signed DIMACS integer (non-zero).
  static constexpr Literal from_dimacs(std::int64_t value) {
    if (value == 0) {
      throw std::domain_error("literal variable ids start at 1");
    }
    return value > 0 ? pos(static_cast<Variable>(value))
                     : neg(static_cast<Variable>(-value));
  }

  constexpr Variable var() const noexcept { return var_; }
  constexpr bool positive() const noexcept { return positive_; }
  constexpr std::int64_t dimacs() const noexcept {
    return positive_ ? static_cast<std::int64_t>(var_) : -static_cast<std::int64_t>(var_);
  }

  constexpr Literal operator~() const noexcept {
    Literal l;
    l.var_ = var_;
    l.positive_ = !positive_;
    return l;
  }

  friend constexpr bool operator==(Literal, Literal) = default;

 private:
  Variable var_ = 0;
  bool positive_ = true;
};

using Clause = std::vector<Literal>;

class CnfFormula {
 public:
  CnfFormula() = default;
  explicit CnfFormula(std::size_t num_vars) : num_vars_(num_vars) {}

  std::size_t num_vars() const noexcept { return num_vars_; }
  std::size_t num_clauses() const noexcept { return clauses_.size(); }
  const std::vector<Clause>& clauses() const noexcept { return clauses_; }

  /// Grows the declared variable count; never shrinks it.
  void reserve_vars(std::size_t count) {
    if (count > num_vars_) {
      num_vars_ = count;
    }
  }

  /// Appends the clause verbatim. An empty clause makes the formula UNSAT.
  void add_clause(std::span<const Literal> lits) {
    for (auto l : lits) {
      if (l.var() == 0) {
        throw std::domain_error("literal with variable 0");
      }
      reserve_vars(l.var());
    }
    clauses_.emplace_back(lits.begin(), lits.end());
  }

  void add_clause(std::initializer_list<Literal> lits) {
    add_clause(std::span<const Literal>(lits.begin(), lits.size()));
  }

  void add_clauses(const std::vector<Clause>& clauses) {
    for (const auto& c : clauses) {
      add_clause(c);
    }
  }

 private:
  std::size_t num_vars_ = 0;
  std::vector<Clause> clauses_;
};

class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::size_t num_vars) : values_(num_vars + 1, false) {}

  std::size_t num_vars() const noexcept { return values_.empty() ? 0 : values_.size() - 1; }

  bool value(Variable var) const {
    if (var == 0 || var >= values_.size()) {
      throw std::out_of_range("variable " + std::to_string(var) + " not in assignment");
    }
    return values_[var];
  }

  void set(Variable var, bool value) {
    if (var == 0) {
      throw std::domain_error("variable 0 is not a valid id");
    }
    if (var >= values_.size()) {
      values_.resize(var + 1, false);
    }
    values_[var] = value;
  }

  bool satisfies(Literal l) const { return value(l.var()) == l.positive(); }

  bool satisfies(const CnfFormula& f) const {
    for (const auto& c : f.clauses()) {
      bool sat = false;
      for (auto l : c) {
        if (satisfies(l)) {
          sat = true;
          break;
        }
      }
      if (!sat) {
        return false;
      }
    }
    return true;
  }

 private:
  std::vector<bool> values_;
};

inline std::string write_dimacs(const CnfFormula& f) {
  std::string out;
  out.reserve(16 + f.num_clauses() * 16);
  out += "p cnf " + std::to_string(f.num_vars()) + " " + std::to_string(f.num_clauses()) + "\n";
  for (const auto& c : f.clauses()) {
    for (auto l : c) {
      out += std::to_string(l.dimacs());
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

enum class SolveStatus { sat, unsat, unknown };

inline std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::sat:
      return "SAT";
    case SolveStatus::unsat:
      return "UNSAT";
    case SolveStatus::unknown:
      return "UNKNOWN";
  }
  return "?";
}

struct SolveResult {
  SolveStatus status = SolveStatus::unknown;
  Assignment model;        // meaningful only for sat
  std::string diagnostic;  // reason for unknown, solver notes otherwise
  double seconds = 0.0;
};

/// Reads "s ..." and "v ... 0" lines. With num_vars given, a SAT answer
/// whose model misses a variable in 1..num_vars is reported as unknown.
inline SolveResult parse_model(std::string_view output,
                               std::optional<std::size_t> num_vars = std::nullopt) {
  SolveResult result;
  std::optional<SolveStatus> status;
  Assignment model(num_vars.value_or(0));
  std::vector<bool> seen(num_vars.value_or(0) + 1, false);
  bool terminated = false;

  std::istringstream in{std::string(output)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.rfind("s ", 0) == 0) {
      const auto word = line.substr(2);
      if (word == "SATISFIABLE") {
        status = SolveStatus::sat;
      } else if (word == "UNSATISFIABLE") {
        status = SolveStatus::unsat;
      } else if (word == "UNKNOWN" || word == "INDETERMINATE") {
        status = SolveStatus::unknown;
      } else {
        result.diagnostic = "unrecognized solution line: " + line;
        return result;
      }
    } else if (line.rfind("v", 0) == 0 && (line.size() == 1 || line[1] == ' ')) {
      std::istringstream values(line.substr(1));
      std::string token;
      while (values >> token) {
        char* end = nullptr;
        const long long value = std::strtoll(token.c_str(), &end, 10);
        if (end == token.c_str() || *end != '\0') {
          result.diagnostic = "malformed value token '" + token + "'";
          return result;
        }
        if (value == 0) {
          terminated = true;
          continue;
        }
        const auto var = static_cast<Variable>(value > 0 ? value : -value);
        model.set(var, value > 0);
        if (var >= seen.size()) {
          seen.resize(var + 1, false);
        }
        seen[var] = true;
      }
    }
  }

  if (!status) {
    result.diagnostic = output.empty() ? "empty solver output" : "no solution line in solver output";
    return result;
  }
  if (*status != SolveStatus::sat) {
    result.status = *status;
    if (*status == SolveStatus::unknown) {
      result.diagnostic = "solver gave up";
    }
    return result;
  }
  if (!terminated) {
    result.diagnostic = "truncated model: missing terminating 0";
    return result;
  }
  if (num_vars) {
    for (std::size_t v = 1; v <= *num_vars; ++v) {
      if (!seen[v]) {
        result.diagnostic = "model misses variable " + std::to_string(v);
        return result;
      }
    }
  }
  result.status = SolveStatus::sat;
  result.model = std::move(model);
  return result;
}

}  // namespace gsynth
