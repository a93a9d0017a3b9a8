#include "metrise/poly.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "metrise/errors.hpp"

namespace metrise {

VarsPtr make_vars(std::initializer_list<std::string> names) {
    return std::make_shared<const VarList>(names);
}

VarsPtr make_vars(VarList names) {
    return std::make_shared<const VarList>(std::move(names));
}

VarsPtr Poly::empty_vars() {
    static const VarsPtr e = std::make_shared<const VarList>();
    return e;
}

bool grlex_greater(const Expvec& a, const Expvec& b) {
    unsigned da = std::accumulate(a.begin(), a.end(), 0u);
    unsigned db = std::accumulate(b.begin(), b.end(), 0u);
    if (da != db) return da > db;
    return a > b; // lexicographic on exponent vectors
}

Poly Poly::constant(const Rat& c, VarsPtr vars) {
    Poly p(std::move(vars));
    if (c != 0) p.terms_.push_back({Expvec(p.vars_->size(), 0), c});
    return p;
}

Poly Poly::variable(const std::string& name, const VarsPtr& vars) {
    auto it = std::find(vars->begin(), vars->end(), name);
    if (it == vars->end())
        throw input_error("variable '" + name + "' not declared in this context");
    Poly p(vars);
    Expvec e(vars->size(), 0);
    e[static_cast<std::size_t>(it - vars->begin())] = 1;
    p.terms_.push_back({std::move(e), Rat(1)});
    return p;
}

Poly Poly::from_terms(VarsPtr vars, std::map<Expvec, Rat> terms) {
    Poly p(std::move(vars));
    p.normalize(std::move(terms));
    return p;
}

void Poly::normalize(std::map<Expvec, Rat>&& acc) {
    terms_.clear();
    terms_.reserve(acc.size());
    for (auto& [m, c] : acc)
        if (c != 0) terms_.push_back({m, std::move(c)});
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return grlex_greater(a.mono, b.mono); });
}

bool Poly::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() != 1) return false;
    const Expvec& m = terms_[0].mono;
    return std::all_of(m.begin(), m.end(), [](std::uint32_t e) { return e == 0; });
}

Rat Poly::constant_value() const {
    if (terms_.empty()) return Rat(0);
    check_internal(is_constant(), "constant_value on non-constant polynomial");
    return terms_[0].coeff;
}

unsigned Poly::degree() const {
    unsigned d = 0;
    for (const auto& t : terms_)
        d = std::max(d, std::accumulate(t.mono.begin(), t.mono.end(), 0u));
    return d;
}

std::pair<Poly, Poly> aligned(const Poly& a, const Poly& b) {
    if (a.vars_ == b.vars_ || *a.vars_ == *b.vars_) return {a, b};
    VarList merged = *a.vars_;
    for (const auto& v : *b.vars_)
        if (std::find(merged.begin(), merged.end(), v) == merged.end()) merged.push_back(v);
    VarsPtr mv = make_vars(std::move(merged));
    return {a.remap(mv), b.remap(mv)};
}

Poly Poly::remap(const VarsPtr& newvars) const {
    if (newvars == vars_ || *newvars == *vars_) {
        Poly p = *this;
        p.vars_ = newvars;
        return p;
    }
    std::vector<int> slot(vars_->size(), -1);
    for (std::size_t i = 0; i < vars_->size(); ++i) {
        auto it = std::find(newvars->begin(), newvars->end(), (*vars_)[i]);
        if (it != newvars->end()) slot[i] = static_cast<int>(it - newvars->begin());
    }
    std::map<Expvec, Rat> acc;
    for (const auto& t : terms_) {
        Expvec e(newvars->size(), 0);
        for (std::size_t i = 0; i < t.mono.size(); ++i) {
            if (t.mono[i] == 0) continue;
            if (slot[i] < 0)
                throw input_error("variable '" + (*vars_)[i] + "' missing from target universe");
            e[static_cast<std::size_t>(slot[i])] += t.mono[i];
        }
        acc[std::move(e)] += t.coeff;
    }
    Poly p(newvars);
    p.normalize(std::move(acc));
    return p;
}

Poly Poly::rename_vars(const std::map<std::string, std::string>& names, const VarsPtr& newvars) const {
    std::vector<int> slot(vars_->size(), -1);
    for (std::size_t i = 0; i < vars_->size(); ++i) {
        auto it = names.find((*vars_)[i]);
        std::string target = it == names.end() ? (*vars_)[i] : it->second;
        auto jt = std::find(newvars->begin(), newvars->end(), target);
        if (jt != newvars->end()) slot[i] = static_cast<int>(jt - newvars->begin());
    }
    std::map<Expvec, Rat> acc;
    for (const auto& t : terms_) {
        Expvec e(newvars->size(), 0);
        for (std::size_t i = 0; i < t.mono.size(); ++i) {
            if (t.mono[i] == 0) continue;
            if (slot[i] < 0)
                throw input_error("variable '" + (*vars_)[i] + "' missing from rename target");
            e[static_cast<std::size_t>(slot[i])] += t.mono[i];
        }
        acc[std::move(e)] += t.coeff;
    }
    Poly p(newvars);
    p.normalize(std::move(acc));
    return p;
}

Poly Poly::operator-() const {
    Poly p = *this;
    for (auto& t : p.terms_) t.coeff = -t.coeff;
    return p;
}

namespace {

// merge two grlex-descending term lists
std::vector<Poly::Term> merge_terms(const std::vector<Poly::Term>& a,
                                    const std::vector<Poly::Term>& b, bool subtract) {
    std::vector<Poly::Term> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && grlex_greater(a[i].mono, b[j].mono))) {
            out.push_back(a[i++]);
        } else if (i == a.size() || grlex_greater(b[j].mono, a[i].mono)) {
            out.push_back(b[j]);
            if (subtract) out.back().coeff = -out.back().coeff;
            ++j;
        } else {
            Rat c = a[i].coeff;
            if (subtract) c -= b[j].coeff; else c += b[j].coeff;
            if (c != 0) out.push_back({a[i].mono, std::move(c)});
            ++i; ++j;
        }
    }
    return out;
}

} // namespace

Poly& Poly::operator+=(const Poly& o) {
    if (vars_ == o.vars_ || *vars_ == *o.vars_) {
        terms_ = merge_terms(terms_, o.terms_, false);
        return *this;
    }
    auto [a, b] = aligned(*this, o);
    a.terms_ = merge_terms(a.terms_, b.terms_, false);
    *this = std::move(a);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (vars_ == o.vars_ || *vars_ == *o.vars_) {
        terms_ = merge_terms(terms_, o.terms_, true);
        return *this;
    }
    auto [a, b] = aligned(*this, o);
    a.terms_ = merge_terms(a.terms_, b.terms_, true);
    *this = std::move(a);
    return *this;
}

Poly operator*(const Poly& a0, const Poly& b0) {
    if (a0.terms_.empty()) return a0;
    if (b0.terms_.empty()) return Poly(a0.vars_);
    const bool same = a0.vars_ == b0.vars_ || *a0.vars_ == *b0.vars_;
    const Poly* pa = &a0;
    const Poly* pb = &b0;
    Poly ta, tb;
    if (!same) {
        std::tie(ta, tb) = aligned(a0, b0);
        pa = &ta; pb = &tb;
    }
    std::map<Expvec, Rat> acc;
    const std::size_t n = pa->vars_->size();
    Expvec e(n);
    for (const auto& s : pa->terms_) {
        for (const auto& t : pb->terms_) {
            for (std::size_t k = 0; k < n; ++k) e[k] = s.mono[k] + t.mono[k];
            auto [it, fresh] = acc.try_emplace(e, Rat(0));
            it->second += s.coeff * t.coeff;
        }
    }
    Poly p(pa->vars_);
    p.normalize(std::move(acc));
    return p;
}

Poly Poly::operator*(const Rat& c) const {
    if (c == 0) return Poly(vars_);
    Poly p = *this;
    for (auto& t : p.terms_) t.coeff *= c;
    return p;
}

Poly Poly::pow(unsigned n) const {
    Poly out = Poly::constant(Rat(1), vars_);
    Poly base = *this;
    while (n) {
        if (n & 1u) out = out * base;
        if (n >>= 1u) base = base * base;
    }
    return out;
}

bool Poly::operator==(const Poly& o) const {
    const Poly* pa = this;
    const Poly* pb = &o;
    Poly ta, tb;
    if (!(vars_ == o.vars_ || *vars_ == *o.vars_)) {
        std::tie(ta, tb) = aligned(*this, o);
        pa = &ta; pb = &tb;
    }
    if (pa->terms_.size() != pb->terms_.size()) return false;
    for (std::size_t i = 0; i < pa->terms_.size(); ++i)
        if (pa->terms_[i].mono != pb->terms_[i].mono || pa->terms_[i].coeff != pb->terms_[i].coeff)
            return false;
    return true;
}

Poly Poly::derivative(const std::string& var) const {
    auto it = std::find(vars_->begin(), vars_->end(), var);
    if (it == vars_->end()) return Poly(vars_);
    std::size_t k = static_cast<std::size_t>(it - vars_->begin());
    std::map<Expvec, Rat> acc;
    for (const auto& t : terms_) {
        if (t.mono[k] == 0) continue;
        Expvec e = t.mono;
        Rat c = t.coeff * Rat(e[k]);
        e[k] -= 1;
        acc[std::move(e)] += c;
    }
    Poly p(vars_);
    p.normalize(std::move(acc));
    return p;
}

Rat Poly::evaluate(const std::map<std::string, Rat>& point) const {
    std::vector<Rat> vals;
    vals.reserve(vars_->size());
    std::vector<bool> used(vars_->size(), false);
    for (const auto& t : terms_)
        for (std::size_t i = 0; i < t.mono.size(); ++i)
            if (t.mono[i]) used[i] = true;
    for (std::size_t i = 0; i < vars_->size(); ++i) {
        auto it = point.find((*vars_)[i]);
        if (it == point.end()) {
            if (used[i])
                throw input_error("missing assignment for variable '" + (*vars_)[i] + "'");
            vals.push_back(Rat(0));
        } else {
            vals.push_back(it->second);
        }
    }
    Rat out = 0;
    for (const auto& t : terms_) {
        Rat term = t.coeff;
        for (std::size_t i = 0; i < t.mono.size(); ++i)
            if (t.mono[i]) term *= rat_pow(vals[i], t.mono[i]);
        out += term;
    }
    return out;
}

Poly Poly::substitute(const std::map<std::string, Rat>& point) const {
    std::vector<int> sub(vars_->size(), -1);
    std::vector<Rat> vals(vars_->size());
    for (std::size_t i = 0; i < vars_->size(); ++i) {
        auto it = point.find((*vars_)[i]);
        if (it != point.end()) { sub[i] = 1; vals[i] = it->second; }
    }
    std::map<Expvec, Rat> acc;
    for (const auto& t : terms_) {
        Rat c = t.coeff;
        Expvec e = t.mono;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (sub[i] > 0 && e[i]) {
                c *= rat_pow(vals[i], e[i]);
                e[i] = 0;
            }
        }
        if (c != 0) acc[std::move(e)] += c;
    }
    Poly p(vars_);
    p.normalize(std::move(acc));
    return p;
}

Rat Poly::coefficient(const std::map<std::string, unsigned>& mono) const {
    Expvec want(vars_->size(), 0);
    for (const auto& [name, e] : mono) {
        auto it = std::find(vars_->begin(), vars_->end(), name);
        if (it == vars_->end()) {
            if (e) return Rat(0);
            continue;
        }
        want[static_cast<std::size_t>(it - vars_->begin())] = e;
    }
    for (const auto& t : terms_)
        if (t.mono == want) return t.coeff;
    return Rat(0);
}

std::string Poly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        Rat c = t.coeff;
        bool neg = c < 0;
        if (neg) c = -c;
        if (first) {
            if (neg) os << "-";
            first = false;
        } else {
            os << (neg ? " - " : " + ");
        }
        bool has_mono = false;
        std::ostringstream mono;
        for (std::size_t i = 0; i < t.mono.size(); ++i) {
            if (!t.mono[i]) continue;
            if (has_mono) mono << "*";
            mono << (*vars_)[i];
            if (t.mono[i] > 1) mono << "^" << t.mono[i];
            has_mono = true;
        }
        if (!has_mono) {
            os << to_string(c);
        } else if (c == 1) {
            os << mono.str();
        } else {
            os << to_string(c) << "*" << mono.str();
        }
    }
    return os.str();
}

std::optional<Poly> divide_exact(const Poly& p0, const Poly& q0) {
    if (q0.is_zero()) throw precondition_error("division by the zero polynomial");
    auto [p, q] = aligned(p0, q0);
    if (p.is_zero()) return Poly(p.vars());
    const auto& qt = q.terms();
    const Expvec& qlead = qt[0].mono;
    std::map<Expvec, Rat> quot;
    Poly r = p;
    while (!r.is_zero()) {
        const Expvec& rl = r.terms()[0].mono;
        Expvec t(rl.size());
        for (std::size_t i = 0; i < rl.size(); ++i) {
            if (rl[i] < qlead[i]) return std::nullopt;
            t[i] = rl[i] - qlead[i];
        }
        Rat c = r.terms()[0].coeff / qt[0].coeff;
        quot[t] += c;
        std::map<Expvec, Rat> sub;
        for (const auto& term : qt) {
            Expvec e(t.size());
            for (std::size_t i = 0; i < t.size(); ++i) e[i] = t[i] + term.mono[i];
            sub[std::move(e)] += c * term.coeff;
        }
        r -= Poly::from_terms(r.vars(), std::move(sub));
    }
    return Poly::from_terms(p.vars(), std::move(quot));
}

} // namespace metrise
