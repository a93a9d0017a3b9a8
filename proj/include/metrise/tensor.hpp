#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "metrise/poly.hpp"

namespace metrise {

enum class Variance : unsigned char { Up, Down };

/// Dense weighted tensor over dimension 3: one Poly per index assignment,
/// an ordered valence, and a rational projective weight. Components are
/// stored in the coordinate scale (the scale whose volume form is
/// dx1^dx2^dx3); covariant derivatives of weight-w objects pick up the
/// extra (w/4)*Gamma_ab^b term, the unique choice making the weighted
/// epsilon tensors covariant constant.
class Tensor {
public:
    Tensor() : weight_(0), vars_(Poly::empty_vars()) {}
    Tensor(std::vector<Variance> valence, Rat weight, VarsPtr vars);

    static Tensor scalar(Poly value, Rat weight = Rat(0));
    static Tensor zero(std::vector<Variance> valence, Rat weight, VarsPtr vars);
    /// delta_a^b, slots (Down, Up), weight 0
    static Tensor delta(VarsPtr vars);
    /// eps_{abc}: unit alternating symbol, three Down slots, weight +4
    static Tensor eps_down(VarsPtr vars);
    /// eps^{abc}: unit alternating symbol, three Up slots, weight -4
    static Tensor eps_up(VarsPtr vars);

    int rank() const { return static_cast<int>(valence_.size()); }
    const std::vector<Variance>& valence() const { return valence_; }
    const Rat& weight() const { return weight_; }
    Tensor& set_weight(Rat w) { weight_ = std::move(w); return *this; }
    const VarsPtr& vars() const { return vars_; }
    std::size_t size() const { return comp_.size(); }

    const Poly& at(std::size_t lin) const { return comp_[lin]; }
    Poly& at(std::size_t lin) { return comp_[lin]; }
    const Poly& operator()(const std::vector<int>& idx) const { return comp_[encode(idx)]; }
    Poly& operator()(const std::vector<int>& idx) { return comp_[encode(idx)]; }

    std::size_t encode(const std::vector<int>& idx) const;
    std::vector<int> decode(std::size_t lin) const;

    bool is_zero() const;
    bool operator==(const Tensor& o) const;
    bool operator!=(const Tensor& o) const { return !(*this == o); }

    Tensor operator-() const;
    friend Tensor operator+(const Tensor& a, const Tensor& b);
    friend Tensor operator-(const Tensor& a, const Tensor& b);
    Tensor scaled(const Rat& c) const;
    Tensor scaled(const Poly& p) const;

    /// Substitute rational values for (a subset of) variables componentwise.
    Tensor substituted(const std::map<std::string, Rat>& point) const;
    /// Rebuild all components over a universe containing the current one.
    Tensor remapped(const VarsPtr& vars) const;

    std::string str(const std::string& name) const;

private:
    std::vector<Variance> valence_;
    Rat weight_;
    VarsPtr vars_;
    std::vector<Poly> comp_;
};

/// Outer product; valences concatenate, weights add.
Tensor outer(const Tensor& a, const Tensor& b);

/// Trace slot i (Up) against slot j (Down) of one tensor.
Tensor contract(const Tensor& t, int i, int j);

/// Product of a and b with the listed (slot-of-a, slot-of-b) pairs contracted.
/// Result slots: free slots of a in order, then free slots of b.
Tensor mul_contract(const Tensor& a, const Tensor& b,
                    const std::vector<std::pair<int, int>>& pairs);

/// Idempotent average over all permutations of the named slots (round-bracket
/// convention). All slots must share one variance.
Tensor symmetrize(const Tensor& t, const std::vector<int>& slots);
Tensor antisymmetrize(const Tensor& t, const std::vector<int>& slots);
/// Average over all slots (which must all be the same variance).
Tensor symmetrize_all(const Tensor& t);

Tensor permute_slots(const Tensor& t, const std::vector<int>& perm);

/// nabla_a T: adds one Down slot in front. gamma is Gamma_{bc}^a with slots
/// (Down b, Down c, Up a); coords name the three coordinate variables.
Tensor covariant_derivative(const Tensor& t, const Tensor& gamma,
                            const std::array<std::string, 3>& coords);

/// Contracted-index notation, e.g. nsum("apq,bqp->ab", {&V, &V}) for
/// A^{ab} = V^{ap}_q V^{bq}_p. Per factor: one label per slot in slot order
/// (variances come from the tensors). A label appearing twice, with opposite
/// variances in different factors, is contracted; the output spec orders the
/// free labels.
Tensor nsum(const std::string& spec, const std::vector<const Tensor*>& factors);

} // namespace metrise
