#include "mathcast/evaluator.hpp"

#include <array>
#include <cmath>
#include <functional>

#include "mathcast/error.hpp"
#include "mathcast/parser.hpp"
#include "mathcast/registry.hpp"
#include "mathcast/translator.hpp"

namespace mathcast {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr long long kMaxIterations = 1000000;
constexpr int kCauchyPoints = 32;
constexpr double kCauchyRadius = 0.05;
const Complex kI(0, 1);

[[noreturn]] void unsupported(const std::string& what) {
  throw Error(ErrorCode::kUnsupportedFunction, what);
}
[[noreturn]] void domain(const std::string& what) { throw Error(ErrorCode::kDomainError, what); }

using Fn = std::function<Complex(const std::vector<Complex>&)>;

const std::map<std::string, std::pair<int, Fn>>& functions() {
  using V = std::vector<Complex>;
  static const std::map<std::string, std::pair<int, Fn>> table = {
      {"sin", {1, [](const V& a) { return std::sin(a[0]); }}},
      {"cos", {1, [](const V& a) { return std::cos(a[0]); }}},
      {"tan", {1, [](const V& a) { return std::tan(a[0]); }}},
      {"cot", {1, [](const V& a) { return 1.0 / std::tan(a[0]); }}},
      {"sec", {1, [](const V& a) { return 1.0 / std::cos(a[0]); }}},
      {"csc", {1, [](const V& a) { return 1.0 / std::sin(a[0]); }}},
      {"asin", {1, [](const V& a) { return std::asin(a[0]); }}},
      {"acos", {1, [](const V& a) { return std::acos(a[0]); }}},
      {"atan", {1, [](const V& a) { return std::atan(a[0]); }}},
      {"sinh", {1, [](const V& a) { return std::sinh(a[0]); }}},
      {"cosh", {1, [](const V& a) { return std::cosh(a[0]); }}},
      {"tanh", {1, [](const V& a) { return std::tanh(a[0]); }}},
      {"exp", {1, [](const V& a) { return std::exp(a[0]); }}},
      {"log",
       {1,
        [](const V& a) {
          if (std::abs(a[0]) == 0) domain("logarithm of zero");
          return std::log(a[0]);
        }}},
      {"arg", {1, [](const V& a) { return Complex(std::arg(a[0]), 0); }}},
      {"gamma", {1, [](const V& a) { return sf::gamma(a[0]); }}},
      {"beta", {2, [](const V& a) { return sf::beta(a[0], a[1]); }}},
      {"digamma", {1, [](const V& a) { return sf::digamma(a[0]); }}},
      {"incgamma", {2, [](const V& a) { return sf::upper_incomplete_gamma(a[0], a[1]); }}},
      {"pochhammer", {2, [](const V& a) { return sf::pochhammer(a[0], a[1]); }}},
      {"binomial", {2, [](const V& a) { return sf::binomial(a[0], a[1]); }}},
      {"besselj", {2, [](const V& a) { return sf::bessel_j(a[0], a[1]); }}},
      {"bessely", {2, [](const V& a) { return sf::bessel_y(a[0], a[1]); }}},
      {"besseli", {2, [](const V& a) { return sf::bessel_i(a[0], a[1]); }}},
      {"besselk", {2, [](const V& a) { return sf::bessel_k(a[0], a[1]); }}},
      {"struveh", {2, [](const V& a) { return sf::struve_h(a[0], a[1]); }}},
      {"airyai", {1, [](const V& a) { return sf::airy_ai(a[0]); }}},
      {"airybi", {1, [](const V& a) { return sf::airy_bi(a[0]); }}},
      {"hurwitzzeta", {2, [](const V& a) { return sf::hurwitz_zeta(a[0], a[1]); }}},
      {"zeta", {1, [](const V& a) { return sf::riemann_zeta(a[0]); }}},
      {"erf", {1, [](const V& a) { return sf::erf(a[0]); }}},
      {"erfc", {1, [](const V& a) { return sf::erfc(a[0]); }}},
      {"ierfc",
       {2,
        [](const V& a) {
          long long n;
          if (!sf::is_integer(a[0], &n)) unsupported("ierfc needs an integer order");
          return sf::ierfc(static_cast<int>(n), a[1]);
        }}},
      {"expint_e1", {1, [](const V& a) { return sf::expint_e1(a[0]); }}},
      {"expint_ei", {1, [](const V& a) { return sf::expint_ei(a[0]); }}},
      {"expint_ein", {1, [](const V& a) { return sf::expint_ein(a[0]); }}},
      {"jacobi", {4, [](const V& a) { return sf::jacobi_p(a[2], a[0], a[1], a[3]); }}},
      {"laguerre", {3, [](const V& a) { return sf::laguerre_l(a[1], a[0], a[2]); }}},
      {"legendre", {2, [](const V& a) { return sf::legendre_p(a[0], a[1]); }}},
      {"qpochhammer", {3, [](const V& a) { return sf::q_pochhammer(a[0], a[1], a[2]); }}},
      {"hyp2f1", {4, [](const V& a) { return sf::hyp2f1(a[0], a[1], a[2], a[3]); }}},
  };
  return table;
}

Complex int_power(Complex base, long long n) {
  if (n < 0) {
    if (std::abs(base) == 0) domain("zero raised to a negative power");
    return 1.0 / int_power(base, -n);
  }
  Complex result = 1;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

// +1 / -1 for an infinite bound, 0 otherwise.
int infinity_of(const ExprPtr& e) {
  if (!e) return 0;
  if (e->kind == ExprKind::kConstant && e->text == "infinity") return 1;
  if (e->kind == ExprKind::kAdd && e->args.size() == 1) {
    int s = infinity_of(e->args[0]);
    return e->ops[0] == '-' ? -s : s;
  }
  if (e->kind == ExprKind::kParen) return infinity_of(e->args[0]);
  return 0;
}

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {0.991455371120812639, 0.949107912342758525,
                                        0.864864423359769073, 0.741531185599394440,
                                        0.586087235467691130, 0.405845151377397167,
                                        0.207784955007898468, 0.000000000000000000};
constexpr std::array<double, 8> kWgk = {0.022935322010529225, 0.063092092629978553,
                                        0.104790010322250184, 0.140653259715525919,
                                        0.169004726639267903, 0.190350578064785410,
                                        0.204432940075298892, 0.209482141084727828};
constexpr std::array<double, 4> kWg = {0.129484966168869693, 0.279705391489276668,
                                       0.381830050505118945, 0.417959183673469388};

class Evaluator {
 public:
  Evaluator(const MacroRegistry& reg, const EvalOptions& opt) : reg_(reg), opt_(opt) {}

  Complex eval(const ExprPtr& e, Assignment& vals) {
    check_deadline();
    switch (e->kind) {
      case ExprKind::kNumber:
        return e->value;
      case ExprKind::kVariable: {
        if (e->primes > 0) unsupported("prime on a plain identifier");
        auto it = vals.find(e->text);
        if (it == vals.end()) domain("variable " + e->text + " has no value");
        return it->second;
      }
      case ExprKind::kConstant:
        if (e->text == "pi") return kPi;
        if (e->text == "e") return std::exp(1.0);
        if (e->text == "i") return kI;
        if (e->text == "eulergamma") return 0.57721566490153286061;
        unsupported("infinity outside operator bounds");
      case ExprKind::kAdd: {
        Complex s = 0;
        for (std::size_t i = 0; i < e->args.size(); ++i) {
          Complex v = eval(e->args[i], vals);
          s += e->ops[i] == '-' ? -v : v;
        }
        return s;
      }
      case ExprKind::kMul: {
        Complex p = 1;
        for (std::size_t i = 0; i < e->args.size(); ++i) {
          Complex v = eval(e->args[i], vals);
          p = e->ops[i] == '/' ? divide(p, v) : p * v;
        }
        return p;
      }
      case ExprKind::kDivide:
        return divide(eval(e->args[0], vals), eval(e->args[1], vals));
      case ExprKind::kPower:
        return power(e, vals);
      case ExprKind::kFactorial:
        return sf::gamma(eval(e->args[0], vals) + 1.0);
      case ExprKind::kParen:
        return eval(e->args[0], vals);
      case ExprKind::kAbs:
        return std::abs(eval(e->args[0], vals));
      case ExprKind::kBuiltin: {
        if (e->text == "sqrt") return std::sqrt(eval(e->args[0], vals));
        if (e->text == "root") {
          return principal_power(eval(e->args[1], vals), 1.0 / eval(e->args[0], vals));
        }
        Complex v = eval(e->args[0], vals);
        return e->text == "Re" ? v.real() : v.imag();
      }
      case ExprKind::kCall:
        return call(*e, vals);
      case ExprKind::kSum:
      case ExprKind::kProduct:
        return series(*e, vals);
      case ExprKind::kIntegral:
        return integral(*e, vals);
      case ExprKind::kLimit:
        return limit(*e, vals);
      case ExprKind::kDerivative: {
        long long n = 1;
        if (e->order && !sf::is_integer(eval(e->order, vals), &n)) {
          unsupported("derivative of non-integer order");
        }
        auto it = vals.find(e->bound.var);
        if (it == vals.end()) domain("derivative variable " + e->bound.var + " has no value");
        const ExprPtr& body = e->args[0];
        const std::string var = e->bound.var;
        return derivative(
            [&](Complex x) {
              Assignment local = vals;
              local[var] = x;
              return eval(body, local);
            },
            it->second, n);
      }
      case ExprKind::kSet:
      case ExprKind::kTuple:
      case ExprKind::kRelation:
        unsupported("expression has no numeric value");
    }
    unsupported("unknown expression");
  }

  std::optional<bool> predicate(const ExprPtr& e, Assignment& vals) {
    if (e->kind != ExprKind::kRelation) return std::nullopt;
    std::vector<Complex> v;
    for (const ExprPtr& a : e->args) v.push_back(eval(a, vals));
    for (std::size_t i = 0; i < e->relations.size(); ++i) {
      const std::string& r = e->relations[i];
      Complex a = v[i], b = v[i + 1];
      double scale = std::max({1.0, std::abs(a), std::abs(b)});
      bool eq = std::abs(a - b) < 1e-12 * scale;
      bool ok;
      if (r == "=") {
        ok = eq;
      } else if (r == "\\neq") {
        ok = !eq;
      } else if (r == "<" || r == "\\leq" || r == ">" || r == "\\geq") {
        if (std::abs(a.imag()) > 1e-12 * scale || std::abs(b.imag()) > 1e-12 * scale) return false;
        double x = a.real(), y = b.real();
        ok = r == "<" ? x < y : r == "\\leq" ? x <= y : r == ">" ? x > y : x >= y;
      } else {
        return std::nullopt;
      }
      if (!ok) return false;
    }
    return true;
  }

 private:
  void check_deadline() const {
    if (opt_.deadline && Clock::now() > *opt_.deadline) {
      throw Error(ErrorCode::kTimeout, "evaluation exceeded its time budget");
    }
  }

  static Complex divide(Complex a, Complex b) {
    if (std::abs(b) == 0) domain("division by zero");
    return a / b;
  }

  static Complex principal_power(Complex b, Complex x) {
    long long n;
    if (sf::is_integer(x, &n) && std::llabs(n) <= 1000000) return int_power(b, n);
    if (std::abs(b) == 0) {
      if (x.real() > 0) return 0;
      domain("zero raised to a non-positive power");
    }
    return std::exp(x * std::log(b));
  }

  Complex power(const ExprPtr& e, Assignment& vals) {
    const ExprPtr& base = e->args[0];
    Complex x = eval(e->args[1], vals);
    if (base->kind == ExprKind::kConstant && base->text == "e") return std::exp(x);
    return principal_power(eval(base, vals), x);
  }

  template <typename F>
  Complex derivative(F f, Complex x0, long long n) {
    if (n < 0) unsupported("negative derivative order");
    if (n == 0) return f(x0);
    Complex sum = 0;
    for (int k = 0; k < kCauchyPoints; ++k) {
      double theta = 2 * kPi * k / kCauchyPoints;
      Complex w = std::polar(1.0, theta);
      sum += f(x0 + kCauchyRadius * w) * std::polar(1.0, -theta * static_cast<double>(n));
    }
    double fact = std::tgamma(static_cast<double>(n) + 1);
    return sum * fact / (kCauchyPoints * std::pow(kCauchyRadius, static_cast<double>(n)));
  }

  Complex apply(const MacroEntry& entry, const std::vector<Complex>& args, Assignment& vals) {
    if (!entry.eval.empty()) {
      auto it = functions().find(entry.eval);
      if (it == functions().end()) unsupported("no evaluator for \\" + entry.name);
      if (static_cast<int>(args.size()) != it->second.first) {
        unsupported("\\" + entry.name + " evaluated with the wrong argument count");
      }
      return it->second.second(args);
    }
    if (entry.alternative && depth_ < 16) {
      std::vector<ExprPtr> bindings;
      Assignment local = vals;
      for (std::size_t i = 0; i < args.size(); ++i) {
        std::string name = "\x01slot" + std::to_string(i);
        local[name] = args[i];
        bindings.push_back(make_variable(name));
      }
      ExprPtr expanded =
          build_expr(parse_latex(*entry.alternative, reg_, ParseOptions{true}), reg_, bindings);
      ++depth_;
      Complex v = eval(expanded, local);
      --depth_;
      return v;
    }
    unsupported("no evaluator for \\" + entry.name);
  }

  Complex call(const Expr& e, Assignment& vals) {
    const MacroEntry& entry = *e.entry;
    if (entry.kind == "wronskian") {
      std::string v = extract_wronskian_variable(e.args);
      auto it = vals.find(v);
      if (it == vals.end()) domain("Wronskian variable " + v + " has no value");
      Complex x0 = it->second;
      auto at = [&](const ExprPtr& f) {
        return [&, f](Complex x) {
          Assignment local = vals;
          local[v] = x;
          return eval(f, local);
        };
      };
      Complex f = eval(e.args[0], vals), g = eval(e.args[1], vals);
      return f * derivative(at(e.args[1]), x0, 1) - derivative(at(e.args[0]), x0, 1) * g;
    }
    std::vector<Complex> args;
    for (const ExprPtr& a : e.args) args.push_back(eval(a, vals));
    if (e.primes == 0) return apply(entry, args, vals);
    if (!entry.diff_slot) {
      throw Error(ErrorCode::kPrimeWithoutSlot, "\\" + entry.name + " has no diff-slot");
    }
    std::size_t idx = static_cast<std::size_t>(entry.diff_slot_index());
    return derivative(
        [&](Complex x) {
          std::vector<Complex> shifted = args;
          shifted[idx] = x;
          return apply(entry, shifted, vals);
        },
        args.at(idx), e.primes);
  }

  long long integer_bound(const ExprPtr& b, Assignment& vals, const std::string& var) {
    if (!b) unsupported("operator over " + var + " lacks a bound");
    if (infinity_of(b) != 0) unsupported("infinite bound for " + var);
    long long n;
    if (!sf::is_integer(eval(b, vals), &n)) unsupported("non-integer bound for " + var);
    return n;
  }

  Complex series(const Expr& e, Assignment& vals) {
    bool sum = e.kind == ExprKind::kSum;
    Complex acc = sum ? 0.0 : 1.0;
    const std::string& var = e.bound.var;
    std::optional<Complex> saved;
    if (auto it = vals.find(var); it != vals.end()) saved = it->second;
    auto step = [&](Complex value) {
      vals[var] = value;
      Complex v = eval(e.args[0], vals);
      acc = sum ? acc + v : acc * v;
    };
    if (e.bound.membership) {
      const ExprPtr& set = e.bound.membership;
      if (set->kind != ExprKind::kSet) unsupported("membership over a symbolic set");
      std::vector<Complex> members;
      for (const ExprPtr& m : set->args) members.push_back(eval(m, vals));
      for (Complex m : members) step(m);
    } else {
      long long lo = integer_bound(e.bound.lower, vals, var);
      long long hi = integer_bound(e.bound.upper, vals, var);
      if (hi - lo > kMaxIterations) unsupported("operator range too long");
      for (long long k = lo; k <= hi; ++k) step(static_cast<double>(k));
    }
    if (saved) {
      vals[var] = *saved;
    } else {
      vals.erase(var);
    }
    return acc;
  }

  template <typename F>
  Complex gauss_kronrod(F& f, double a, double b, double tol, int depth, int& budget) {
    check_deadline();
    double c = (a + b) / 2, h = (b - a) / 2;
    Complex fc = f(c);
    Complex kronrod = fc * kWgk[7];
    Complex gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
      double dx = h * kXgk[j];
      Complex s = f(c - dx) + f(c + dx);
      kronrod += kWgk[j] * s;
      if (j % 2 == 1) gauss += kWg[j / 2] * s;
    }
    kronrod *= h;
    gauss *= h;
    budget -= 15;
    double err = std::abs(kronrod - gauss);
    if (err <= tol || depth >= 40 || budget <= 0 || std::abs(b - a) < 1e-12) {
      if (err > std::max(tol, 1e-6) && (depth >= 40 || budget <= 0)) {
        domain("quadrature did not converge");
      }
      return kronrod;
    }
    return gauss_kronrod(f, a, c, tol / 2, depth + 1, budget) +
           gauss_kronrod(f, c, b, tol / 2, depth + 1, budget);
  }

  Complex integral(const Expr& e, Assignment& vals) {
    const std::string& var = e.bound.var;
    if (!e.bound.lower || !e.bound.upper) unsupported("indefinite integral");
    int lo_inf = infinity_of(e.bound.lower), hi_inf = infinity_of(e.bound.upper);
    std::optional<Complex> lo, hi;
    if (!lo_inf) lo = eval(e.bound.lower, vals);
    if (!hi_inf) hi = eval(e.bound.upper, vals);
    Assignment local = vals;
    auto value = [&](Complex t) {
      local[var] = t;
      Complex v = eval(e.args[0], local);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) domain("integrand is not finite");
      return v;
    };
    int budget = 200000;
    double tol = opt_.quadrature_tolerance;
    if (!lo_inf && !hi_inf) {
      Complex a = *lo, d = *hi - *lo;
      // s = 3u^2 - 2u^3 flattens the ends, so t^(-1/2) type endpoint
      // singularities become bounded.
      auto f = [&](double u) {
        double s = u * u * (3 - 2 * u);
        return value(a + s * d) * d * (6 * u * (1 - u));
      };
      return gauss_kronrod(f, 0.0, 1.0, tol, 0, budget);
    }
    auto tail = [&](Complex start, double dir) {
      // t = start + dir * u / (1 - u)
      auto f = [&](double u) {
        double w = 1 - u;
        return value(start + dir * u / w) / (w * w);
      };
      return gauss_kronrod(f, 0.0, 1.0, tol, 0, budget);
    };
    if (lo_inf == -1 && hi_inf == 1) return tail(0.0, -1) + tail(0.0, 1);
    if (hi_inf == 1 && lo) return tail(*lo, 1);
    if (lo_inf == -1 && hi) return tail(*hi, -1);
    unsupported("integral with reversed infinite bounds");
  }

  Complex limit(const Expr& e, Assignment& vals) {
    const std::string& var = e.bound.var;
    if (!e.bound.lower) unsupported("limit without a point");
    Assignment local = vals;
    auto at = [&](Complex x) {
      local[var] = x;
      return eval(e.args[0], local);
    };
    int inf = infinity_of(e.bound.lower);
    if (inf != 0) {
      double s = inf;
      return 2.0 * at(s * 2e6) - at(s * 1e6);
    }
    Complex pt = eval(e.bound.lower, vals);
    const double h = 1e-4;
    auto side = [&](double dir) { return 2.0 * at(pt + dir * h / 2) - at(pt + dir * h); };
    if (e.bound.direction == LimitDirection::kFromAbove) return side(1);
    if (e.bound.direction == LimitDirection::kFromBelow) return side(-1);
    return (at(pt + h) + at(pt - h)) / 2.0;
  }

  const MacroRegistry& reg_;
  const EvalOptions& opt_;
  int depth_ = 0;
};

}  // namespace

Complex evaluate(const ExprPtr& expr, const Assignment& values, const MacroRegistry& registry,
                 const EvalOptions& options) {
  Assignment vals = values;
  return Evaluator(registry, options).eval(expr, vals);
}

std::optional<bool> evaluate_predicate(const ExprPtr& relation, const Assignment& values,
                                       const MacroRegistry& registry,
                                       const EvalOptions& options) {
  Assignment vals = values;
  try {
    return Evaluator(registry, options).predicate(relation, vals);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kTimeout) throw;
    return std::nullopt;
  }
}

}  // namespace mathcast
