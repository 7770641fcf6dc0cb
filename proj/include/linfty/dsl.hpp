#pragma once

// Text format for model specifications.
//
//   # comment
//   algebra cdga A { gen x : 2; rel x^3; d y = x^3; cap 10; }
//   algebra linf L { gen alpha : 1; gen beta : 4; bracket [alpha,alpha,alpha] = 6 beta; }
//   mc tau = x*alpha;
//   path lam = tau0 + (tau1 - tau0) t1 + chi dt1;   (t1, dt1: coordinates on the 1-simplex)
//
// cdga degrees are cohomological, linf degrees homological.  Polynomials use
// rational coefficients p/q, optional '*', '^' powers and parentheses.

#include "linfty/cdga.hpp"
#include "linfty/core.hpp"
#include "linfty/forms.hpp"
#include "linfty/linf_algebra.hpp"
#include "linfty/nerve.hpp"
#include "linfty/poly.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace linfty {

struct SourcePos {
  int line = 1;
  int column = 1;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, SourcePos pos)
      : Error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + msg), message_(msg), pos_(pos) {}
  const std::string& message() const { return message_; }
  SourcePos pos() const { return pos_; }

 private:
  std::string message_;
  SourcePos pos_;
};

/// A polynomial as written: coefficients times ordered factor lists.
struct RawTerm {
  Scalar coeff;
  std::vector<std::pair<std::string, int>> factors;  // (name, power) in written order
  SourcePos pos;
};

struct RawPoly {
  std::vector<RawTerm> terms;
  SourcePos pos;
};

struct GenDecl {
  std::string name;
  int degree = 0;
  SourcePos pos;
};

struct CdgaDecl {
  std::string name;
  std::vector<GenDecl> gens;
  std::vector<RawPoly> relations;
  std::vector<std::pair<GenDecl, RawPoly>> differentials;  // (generator, image)
  std::optional<int> cap;
  SourcePos pos;
};

struct BracketDecl {
  std::vector<std::pair<std::string, SourcePos>> args;
  RawPoly value;
  SourcePos pos;
};

struct LinfDecl {
  std::string name;
  std::vector<GenDecl> gens;
  std::vector<BracketDecl> brackets;
  SourcePos pos;
};

struct ElementDecl {
  std::string name;
  RawPoly value;
  SourcePos pos;
};

struct ModelSpec {
  std::optional<CdgaDecl> cdga;
  std::optional<LinfDecl> linf;
  std::vector<ElementDecl> mcs;
  std::vector<ElementDecl> paths;
  std::optional<int> max_degree;

  const ElementDecl* find_mc(const std::string& n) const {
    for (const auto& m : mcs) {
      if (m.name == n) return &m;
    }
    return nullptr;
  }
  const ElementDecl* find_path(const std::string& n) const {
    for (const auto& m : paths) {
      if (m.name == n) return &m;
    }
    return nullptr;
  }
};

namespace detail {

struct Token {
  enum Kind { Ident, Number, Symbol, End } kind;
  std::string text;
  SourcePos pos;
};

inline std::vector<Token> tokenize(const std::string& src) {
  std::vector<Token> out;
  SourcePos pos;
  std::size_t i = 0;
  auto advance = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j) {
      if (src[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    SourcePos start = pos;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '-')) ++j;
      // a trailing '-' belongs to the next token (subtraction)
      while (j > i && src[j - 1] == '-') --j;
      out.push_back({Token::Ident, src.substr(i, j - i), start});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Token::Number, src.substr(i, j - i), start});
      advance(j - i);
      continue;
    }
    if (std::string("{}[]();:,=+-*/^").find(c) != std::string::npos) {
      out.push_back({Token::Symbol, std::string(1, c), start});
      advance(1);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", start);
  }
  out.push_back({Token::End, "", pos});
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& src) : toks_(tokenize(src)) {}

  ModelSpec parse() {
    ModelSpec spec;
    while (peek().kind != Token::End) {
      const Token& t = peek();
      if (is_word("algebra")) {
        next();
        const Token& kind = expect_ident("algebra kind");
        if (kind.text == "cdga") {
          if (spec.cdga) throw ParseError("second cdga block", kind.pos);
          spec.cdga = parse_cdga(kind.pos);
        } else if (kind.text == "linf") {
          if (spec.linf) throw ParseError("second linf block", kind.pos);
          spec.linf = parse_linf(kind.pos);
        } else {
          throw ParseError("expected 'cdga' or 'linf', found '" + kind.text + "'", kind.pos);
        }
      } else if (is_word("mc") || is_word("path")) {
        bool mc = t.text == "mc";
        next();
        ElementDecl d;
        d.pos = t.pos;
        d.name = expect_ident("name").text;
        expect("=");
        d.value = parse_poly();
        expect(";");
        for (const auto& other : spec.mcs) {
          if (other.name == d.name) throw ParseError("duplicate declaration '" + d.name + "'", d.pos);
        }
        for (const auto& other : spec.paths) {
          if (other.name == d.name) throw ParseError("duplicate declaration '" + d.name + "'", d.pos);
        }
        (mc ? spec.mcs : spec.paths).push_back(std::move(d));
      } else if (is_word("option")) {
        next();
        const Token& key = expect_ident("option name");
        if (key.text != "max_degree") throw ParseError("unknown option '" + key.text + "'", key.pos);
        expect("=");
        spec.max_degree = parse_int();
        expect(";");
      } else {
        throw ParseError("expected 'algebra', 'mc', 'path' or 'option', found '" + t.text + "'", t.pos);
      }
    }
    return spec;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool is_symbol(const char* s) const { return peek().kind == Token::Symbol && peek().text == s; }
  bool is_word(const char* s) const { return peek().kind == Token::Ident && peek().text == s; }

  const Token& expect(const char* s) {
    if (!is_symbol(s)) throw ParseError(std::string("expected '") + s + "', found " + describe(peek()), peek().pos);
    return next();
  }
  const Token& expect_ident(const char* what) {
    if (peek().kind != Token::Ident) throw ParseError(std::string("expected ") + what + ", found " + describe(peek()), peek().pos);
    return next();
  }
  static std::string describe(const Token& t) {
    if (t.kind == Token::End) return "end of input";
    return "'" + t.text + "'";
  }

  int parse_int() {
    bool neg = false;
    if (is_symbol("-")) {
      next();
      neg = true;
    }
    if (peek().kind != Token::Number) throw ParseError("expected an integer, found " + describe(peek()), peek().pos);
    const Token& t = next();
    if (t.text.size() > 9) throw ParseError("integer out of range", t.pos);
    int v = std::stoi(t.text);
    return neg ? -v : v;
  }

  GenDecl parse_gen() {
    GenDecl g;
    g.pos = peek().pos;
    g.name = expect_ident("generator name").text;
    expect(":");
    g.degree = parse_int();
    expect(";");
    return g;
  }

  CdgaDecl parse_cdga(SourcePos at) {
    CdgaDecl d;
    d.pos = at;
    d.name = expect_ident("algebra name").text;
    expect("{");
    while (!is_symbol("}")) {
      if (is_word("gen")) {
        next();
        d.gens.push_back(parse_gen());
      } else if (is_word("rel")) {
        next();
        d.relations.push_back(parse_poly());
        expect(";");
      } else if (is_word("d")) {
        next();
        GenDecl g;
        g.pos = peek().pos;
        g.name = expect_ident("generator name").text;
        expect("=");
        RawPoly p = parse_poly();
        expect(";");
        d.differentials.emplace_back(g, std::move(p));
      } else if (is_word("cap")) {
        next();
        d.cap = parse_int();
        expect(";");
      } else {
        throw ParseError("expected 'gen', 'rel', 'd' or 'cap', found " + describe(peek()), peek().pos);
      }
    }
    expect("}");
    return d;
  }

  LinfDecl parse_linf(SourcePos at) {
    LinfDecl d;
    d.pos = at;
    d.name = expect_ident("algebra name").text;
    expect("{");
    while (!is_symbol("}")) {
      if (is_word("gen")) {
        next();
        d.gens.push_back(parse_gen());
      } else if (is_word("bracket")) {
        BracketDecl b;
        b.pos = next().pos;
        expect("[");
        while (true) {
          const Token& a = expect_ident("generator name");
          b.args.emplace_back(a.text, a.pos);
          if (is_symbol(",")) {
            next();
            continue;
          }
          break;
        }
        expect("]");
        expect("=");
        b.value = parse_poly();
        expect(";");
        d.brackets.push_back(std::move(b));
      } else {
        throw ParseError("expected 'gen' or 'bracket', found " + describe(peek()), peek().pos);
      }
    }
    expect("}");
    return d;
  }

  // poly := ['-'] term (('+'|'-') term)*
  RawPoly parse_poly() {
    RawPoly out;
    out.pos = peek().pos;
    Scalar sign = 1;
    if (is_symbol("-")) {
      next();
      sign = -1;
    } else if (is_symbol("+")) {
      next();
    }
    while (true) {
      RawPoly t = parse_term();
      for (auto& term : t.terms) {
        term.coeff *= sign;
        out.terms.push_back(std::move(term));
      }
      if (is_symbol("+")) {
        next();
        sign = 1;
      } else if (is_symbol("-")) {
        next();
        sign = -1;
      } else {
        break;
      }
    }
    return out;
  }

  bool starts_factor() const {
    return peek().kind == Token::Ident || peek().kind == Token::Number || is_symbol("(");
  }

  // term := factor ('*'? factor)*
  RawPoly parse_term() {
    RawPoly acc = parse_factor();
    while (true) {
      if (is_symbol("*")) {
        next();
        acc = multiply(acc, parse_factor());
      } else if (starts_factor()) {
        acc = multiply(acc, parse_factor());
      } else {
        return acc;
      }
    }
  }

  RawPoly parse_factor() {
    SourcePos at = peek().pos;
    RawPoly base;
    base.pos = at;
    if (peek().kind == Token::Number) {
      Scalar c = parse_scalar(next().text);
      if (is_symbol("/")) {
        next();
        if (peek().kind != Token::Number) throw ParseError("expected a denominator, found " + describe(peek()), peek().pos);
        const Token& den = next();
        Scalar d = parse_scalar(den.text);
        if (d == 0) throw ParseError("zero denominator", den.pos);
        c /= d;
      }
      base.terms.push_back({c, {}, at});
      return with_power(base);
    }
    if (peek().kind == Token::Ident) {
      const Token& t = next();
      int power = 1;
      if (is_symbol("^")) {
        next();
        power = parse_int();
        if (power < 0) throw ParseError("negative power", t.pos);
      }
      if (power == 0) {
        base.terms.push_back({1, {}, at});
      } else {
        base.terms.push_back({1, {{t.text, power}}, at});
      }
      return base;
    }
    if (is_symbol("(")) {
      next();
      RawPoly inner = parse_poly();
      expect(")");
      return with_power(inner);
    }
    throw ParseError("expected a number, name or '(', found " + describe(peek()), peek().pos);
  }

  RawPoly with_power(RawPoly base) {
    if (!is_symbol("^")) return base;
    SourcePos at = next().pos;
    int power = parse_int();
    if (power < 0) throw ParseError("negative power", at);
    RawPoly out;
    out.pos = base.pos;
    out.terms.push_back({1, {}, base.pos});
    for (int k = 0; k < power; ++k) out = multiply(out, base);
    return out;
  }

  static RawPoly multiply(const RawPoly& a, const RawPoly& b) {
    RawPoly out;
    out.pos = a.pos;
    for (const auto& x : a.terms) {
      for (const auto& y : b.terms) {
        RawTerm t{x.coeff * y.coeff, x.factors, x.pos};
        t.factors.insert(t.factors.end(), y.factors.begin(), y.factors.end());
        out.terms.push_back(std::move(t));
      }
    }
    return out;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline ModelSpec parse(const std::string& text) { return detail::Parser(text).parse(); }

// ---------------------------------------------------------------------------
// Building algebraic objects from a parsed model

inline Presentation build_presentation(const CdgaDecl& d) {
  Presentation p;
  std::set<std::string> seen;
  for (const auto& g : d.gens) {
    if (!seen.insert(g.name).second) throw ParseError("duplicate generator '" + g.name + "'", g.pos);
    if (g.degree < 1) throw ValidationError("generator " + g.name + " must have positive cohomological degree");
    p.generators.push_back(g.name);
    p.degrees.push_back(g.degree);
  }
  RingRef ring = p.ring();
  auto convert = [&](const RawPoly& raw) {
    Polynomial out(ring);
    for (const auto& t : raw.terms) {
      Polynomial term = Polynomial::constant(ring, t.coeff);
      for (const auto& [name, power] : t.factors) {
        auto g = ring->find(name);
        if (!g) throw ParseError("unknown generator '" + name + "'", t.pos);
        for (int k = 0; k < power; ++k) term = term * Polynomial::generator(ring, *g);
      }
      out += term;
    }
    return out;
  };
  for (const auto& r : d.relations) p.relations.push_back(convert(r));
  for (const auto& [g, img] : d.differentials) {
    auto idx = ring->find(g.name);
    if (!idx) throw ParseError("unknown generator '" + g.name + "'", g.pos);
    if (p.differential.count(*idx)) throw ParseError("second differential for '" + g.name + "'", g.pos);
    p.differential[*idx] = convert(img);
  }
  p.cap = d.cap;
  return p;
}

inline Cdga build_cdga(const ModelSpec& spec) {
  if (!spec.cdga) return build_quotient(Presentation{});
  return build_quotient(build_presentation(*spec.cdga));
}

inline LInftyAlgebra build_linf(const ModelSpec& spec) {
  if (!spec.linf) throw ValidationError("specification has no linf block");
  const LinfDecl& d = *spec.linf;
  std::vector<BasisEntry> basis;
  std::set<std::string> seen;
  for (const auto& g : d.gens) {
    if (!seen.insert(g.name).second) throw ParseError("duplicate generator '" + g.name + "'", g.pos);
    basis.push_back({g.name, g.degree});
  }
  LInftyAlgebra L(make_space(std::move(basis)));
  const GradedSpace& V = L.graded();
  std::set<TupleKey> keys;
  for (const auto& b : d.brackets) {
    std::vector<int> tuple;
    int expected = static_cast<int>(b.args.size()) - 2;
    for (const auto& [name, pos] : b.args) {
      auto i = V.find(name);
      if (!i) throw ParseError("unknown generator '" + name + "'", pos);
      tuple.push_back(*i);
      expected += V.degree(*i);
    }
    SparseVec value;
    for (const auto& t : b.value.terms) {
      if (t.factors.empty()) {
        if (t.coeff == 0) continue;
        throw ParseError("bracket value must be linear in the generators", t.pos);
      }
      if (t.factors.size() != 1 || t.factors[0].second != 1) throw ParseError("bracket value must be linear in the generators", t.pos);
      auto i = V.find(t.factors[0].first);
      if (!i) throw ParseError("unknown generator '" + t.factors[0].first + "'", t.pos);
      if (V.degree(*i) != expected) {
        throw ValidationError("bracket value " + V.name(*i) + " has degree " + std::to_string(V.degree(*i)) + ", expected " +
                              std::to_string(expected));
      }
      add_term(value, *i, t.coeff);
    }
    auto canon = canonicalize_tuple(tuple, V);
    if (canon && !keys.insert(canon->key).second) throw ParseError("bracket declared twice", b.pos);
    L.set_bracket(tuple, value);
  }
  return L;
}

inline RingRef cdga_ring(const Cdga& A) {
  if (!A.quotient()) throw ValidationError("algebra has no presentation");
  return A.quotient()->ring;
}

namespace detail {

/// Converts a written term into (sign, form factors, cdga factors, linf
/// generator) after moving forms to the front and the linf generator last.
struct SortedTerm {
  Scalar coeff;
  PolyForm form;
  Polynomial cdga;
  int linf = -1;
};

inline SortedTerm sort_term(const RawTerm& t, const RingRef& ring, const GradedSpace& L,
                            std::optional<int> simplex) {
  // classes: 0 form, 1 cdga, 2 linf; parity for Koszul signs
  struct F {
    int cls;
    int parity;
    std::string name;
    int index;
  };
  std::vector<F> fs;
  for (const auto& [name, power] : t.factors) {
    for (int k = 0; k < power; ++k) {
      if (simplex && name.size() >= 2 && (name[0] == 't' || (name[0] == 'd' && name[1] == 't'))) {
        bool is_d = name[0] == 'd';
        std::string digits = name.substr(is_d ? 2 : 1);
        if (!digits.empty() && std::all_of(digits.begin(), digits.end(), ::isdigit)) {
          int v = std::stoi(digits);
          if (v > *simplex) throw ParseError("coordinate '" + name + "' out of range", t.pos);
          fs.push_back({0, is_d ? 1 : 0, name, v});
          continue;
        }
      }
      auto g = ring->find(name);
      auto l = L.find(name);
      if (g && l) throw ParseError("ambiguous name '" + name + "'", t.pos);
      if (g) {
        fs.push_back({1, ring->degrees[*g] % 2, name, *g});
      } else if (l) {
        fs.push_back({2, ((L.degree(*l) % 2) + 2) % 2, name, *l});
      } else {
        throw ParseError("unknown generator '" + name + "'", t.pos);
      }
    }
  }
  long e = 0;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    for (std::size_t j = i + 1; j < fs.size(); ++j) {
      if (fs[i].cls > fs[j].cls) e += fs[i].parity * fs[j].parity;
    }
  }
  SortedTerm out{t.coeff * parity_sign(e), PolyForm::constant(simplex.value_or(0), 1), Polynomial::constant(ring, 1), -1};
  std::stable_sort(fs.begin(), fs.end(), [](const F& a, const F& b) { return a.cls < b.cls; });
  for (const auto& f : fs) {
    if (f.cls == 0) {
      PolyForm factor = f.parity ? PolyForm::dt(*simplex, f.index) : PolyForm::coordinate(*simplex, f.index);
      out.form = wedge(out.form, factor);
    } else if (f.cls == 1) {
      out.cdga = out.cdga * Polynomial::generator(ring, f.index);
    } else {
      if (out.linf >= 0) throw ParseError("term has more than one linf generator", t.pos);
      out.linf = f.index;
    }
  }
  if (out.linf < 0 && out.coeff != 0) throw ParseError("term has no linf generator", t.pos);
  return out;
}

}  // namespace detail

/// Element of A (x) L declared by `mc name = ...`.
inline Element build_element(const ModelSpec& spec, const Cdga& A, const LInftyAlgebra& L, const LInftyAlgebra& T,
                             const RawPoly& raw) {
  (void)spec;
  RingRef ring = cdga_ring(A);
  SparseVec v;
  for (const auto& t : raw.terms) {
    if (t.coeff == 0) continue;
    auto st = detail::sort_term(t, ring, L.graded(), std::nullopt);
    if (st.linf < 0) continue;
    SparseVec a = A.reduce(st.cdga);
    for (const auto& [i, c] : a) add_term(v, tensor_index(A, i, st.linf), st.coeff * c);
  }
  return Element(T.space(), std::move(v));
}

inline Element build_mc(const ModelSpec& spec, const Cdga& A, const LInftyAlgebra& L, const LInftyAlgebra& T,
                        const std::string& name) {
  const ElementDecl* d = spec.find_mc(name);
  if (!d) throw ValidationError("no mc declaration named '" + name + "'");
  return build_element(spec, A, L, T, d->value);
}

/// Path declared by `path name = ...` as a 1-simplex of Omega_1 (x) A (x) L.
/// Names of declared mc elements may be used as summands.
inline GSimplex build_path(const ModelSpec& spec, const Cdga& A, const LInftyAlgebra& L, const LInftyAlgebra& T,
                           const std::string& name) {
  const ElementDecl* d = spec.find_path(name);
  if (!d) throw ValidationError("no path declaration named '" + name + "'");
  RingRef ring = cdga_ring(A);
  GSimplex out(T.space(), 1);
  for (const auto& t : d->value.terms) {
    if (t.coeff == 0) continue;
    // Substitute references to mc declarations (total degree -1).
    RawTerm rest{t.coeff, {}, t.pos};
    std::optional<Element> mc;
    int crossings = 0;
    for (const auto& f : t.factors) {
      if (spec.find_mc(f.first)) {
        if (mc || f.second != 1) throw ParseError("mc reference must appear linearly", t.pos);
        mc = build_mc(spec, A, L, T, f.first);
      } else {
        rest.factors.push_back(f);
        if (mc && f.first.rfind("dt", 0) == 0) crossings += f.second;
      }
    }
    if (mc) {
      PolyForm form = PolyForm::constant(1, rest.coeff * parity_sign(crossings));
      for (const auto& [fname, power] : rest.factors) {
        for (int k = 0; k < power; ++k) {
          if (fname == "t0" || fname == "t1") {
            form = wedge(form, PolyForm::coordinate(1, fname == "t0" ? 0 : 1));
          } else if (fname == "dt0" || fname == "dt1") {
            form = wedge(form, PolyForm::dt(1, fname == "dt0" ? 0 : 1));
          } else {
            throw ParseError("mc reference may only be multiplied by t0, t1, dt0, dt1", t.pos);
          }
        }
      }
      out += GSimplex::product(form, *mc);
      continue;
    }
    auto st = detail::sort_term(rest, ring, L.graded(), 1);
    if (st.linf < 0) continue;
    SparseVec a = A.reduce(st.cdga);
    for (const auto& [i, c] : a) out.add(tensor_index(A, i, st.linf), (st.coeff * c) * st.form);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Printing back to the text format

inline std::string linear_to_string(const SparseVec& v, const GradedSpace& V) {
  if (v.empty()) return "0";
  std::string out;
  for (const auto& [i, c] : v) {
    Scalar a = abs(c);
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (a != 1) out += a.get_str() + " ";
    out += V.name(i);
  }
  return out;
}

inline std::string to_dsl(const Presentation& p, const std::string& name) {
  std::string out = "algebra cdga " + name + " {\n";
  for (std::size_t g = 0; g < p.generators.size(); ++g) {
    out += "  gen " + p.generators[g] + " : " + std::to_string(p.degrees[g]) + ";\n";
  }
  for (const auto& r : p.relations) {
    if (!r.is_zero()) out += "  rel " + r.to_string() + ";\n";
  }
  for (const auto& [g, img] : p.differential) {
    if (!img.is_zero()) out += "  d " + p.generators[static_cast<std::size_t>(g)] + " = " + img.to_string() + ";\n";
  }
  if (p.cap) out += "  cap " + std::to_string(*p.cap) + ";\n";
  return out + "}\n";
}

inline std::string to_dsl(const LInftyAlgebra& L, const std::string& name) {
  const GradedSpace& V = L.graded();
  std::string out = "algebra linf " + name + " {\n";
  for (int i = 0; i < V.dim(); ++i) out += "  gen " + V.name(i) + " : " + std::to_string(V.degree(i)) + ";\n";
  for (const auto& [r, table] : L.tables()) {
    for (const auto& [key, value] : table) {
      out += "  bracket [";
      for (std::size_t k = 0; k < key.size(); ++k) out += (k ? "," : "") + V.name(key[k]);
      out += "] = " + linear_to_string(value, V) + ";\n";
    }
  }
  return out + "}\n";
}

}  // namespace linfty
