#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "metrise/rational.hpp"

namespace metrise {

// Variable universes are shared, ordered name lists. Polynomials over
// different universes merge on demand (left order first).
using VarList = std::vector<std::string>;
using VarsPtr = std::shared_ptr<const VarList>;

VarsPtr make_vars(std::initializer_list<std::string> names);
VarsPtr make_vars(VarList names);

using Expvec = std::vector<std::uint32_t>;

// graded lexicographic order over the declared variable order
bool grlex_greater(const Expvec& a, const Expvec& b);

/// Sparse multivariate polynomial with exact rational coefficients.
/// Canonical form: terms sorted grlex-descending, no zero coefficients.
class Poly {
public:
    struct Term {
        Expvec mono;
        Rat coeff;
    };

    Poly() : vars_(empty_vars()) {}
    explicit Poly(VarsPtr vars) : vars_(std::move(vars)) {}

    static Poly constant(const Rat& c, VarsPtr vars);
    static Poly constant(const Rat& c) { return constant(c, empty_vars()); }
    static Poly variable(const std::string& name, const VarsPtr& vars);
    static Poly from_terms(VarsPtr vars, std::map<Expvec, Rat> terms);

    const VarsPtr& vars() const { return vars_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    /// The constant value; requires is_constant().
    Rat constant_value() const;
    unsigned degree() const;

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    friend Poly operator+(Poly a, const Poly& b) { a += b; return a; }
    friend Poly operator-(Poly a, const Poly& b) { a -= b; return a; }
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly& operator*=(const Poly& o) { *this = *this * o; return *this; }
    Poly operator*(const Rat& c) const;
    Poly pow(unsigned n) const;

    bool operator==(const Poly& o) const;
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly derivative(const std::string& var) const;
    Rat evaluate(const std::map<std::string, Rat>& point) const;
    /// Substitute a subset of variables by rational values; the rest remain.
    Poly substitute(const std::map<std::string, Rat>& point) const;
    /// Rebuild over a different universe (must contain all used variables).
    Poly remap(const VarsPtr& newvars) const;
    Poly rename_vars(const std::map<std::string, std::string>& names, const VarsPtr& newvars) const;

    /// Coefficient of the given monomial in named variables (others must be absent in the monomial).
    Rat coefficient(const std::map<std::string, unsigned>& mono) const;

    std::string str() const;

    static VarsPtr empty_vars();

private:
    VarsPtr vars_;
    std::vector<Term> terms_; // grlex descending, nonzero coeffs

    void normalize(std::map<Expvec, Rat>&& acc);
    friend std::pair<Poly, Poly> aligned(const Poly& a, const Poly& b);
};

/// Both polynomials rebuilt over a common universe.
std::pair<Poly, Poly> aligned(const Poly& a, const Poly& b);

/// Exact division: r with p = q*r, or nullopt when q does not divide p.
/// Throws precondition_error when q is zero.
std::optional<Poly> divide_exact(const Poly& p, const Poly& q);

} // namespace metrise
