#pragma once

// The concrete Dedekind domains Z, Z[i] and F_p[x]: elements, prime ideals,
// reduction into truncated completions, and the ideals with elementary
// abelian quotient that the balance audit ranges over.

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cokernel/detail/arith.hpp"
#include "cokernel/local_ring.hpp"

namespace cokernel {

enum class DomainKind { integers, gaussian_integers, polynomials };

struct DomainId {
    DomainKind kind = DomainKind::integers;
    /// The prime p of F_p[x]; zero for the other domains.
    Word characteristic = 0;

    static DomainId integers() { return {DomainKind::integers, 0}; }
    static DomainId gaussian_integers() { return {DomainKind::gaussian_integers, 0}; }
    static DomainId polynomials(Word p);

    /// Rank of the domain over its prime ring (1 for Z, 2 for Z[i]; 0 for F_p[x]).
    int degree() const;
    std::string name() const;

    friend bool operator==(const DomainId&, const DomainId&) = default;
};

/// Parses "integers", "gaussian-integers" or "polynomials-over-F_p" (with `p`).
DomainId parse_domain(std::string_view kind, Word p = 0);

struct Integer {
    std::int64_t value = 0;
    friend auto operator<=>(const Integer&, const Integer&) = default;
};

struct Gaussian {
    std::int64_t re = 0;
    std::int64_t im = 0;
    friend auto operator<=>(const Gaussian&, const Gaussian&) = default;
};

/// Coefficients over F_p, lowest degree first, reduced and without trailing zeros.
struct Polynomial {
    std::vector<Word> coeffs;
    friend auto operator<=>(const Polynomial&, const Polynomial&) = default;
};

using Element = std::variant<Integer, Gaussian, Polynomial>;

/// Throws UsageError unless `x` is an element of `domain` in canonical form.
void check_element(const DomainId& domain, const Element& x);

Element make_polynomial(const DomainId& domain, std::vector<std::int64_t> coeffs);

Element elem_zero(const DomainId& domain);
Element elem_one(const DomainId& domain);
Element elem_add(const DomainId& domain, const Element& x, const Element& y);
Element elem_sub(const DomainId& domain, const Element& x, const Element& y);
Element elem_mul(const DomainId& domain, const Element& x, const Element& y);
Element elem_neg(const DomainId& domain, const Element& x);
bool elem_is_zero(const Element& x);
bool elem_is_unit(const DomainId& domain, const Element& x);

/// Text grammar: integers "±n"; Gaussian "a+bi" (also "i", "-3i", "2-i");
/// polynomials "c0,c1,..." (coefficients reduced mod p).
Element parse_element(const DomainId& domain, std::string_view text);
std::string format_element(const DomainId& domain, const Element& x);

enum class PrimeKind { rational, gaussian_split, gaussian_inert, gaussian_ramified, polynomial };

struct PrimeIdealDesc {
    DomainId domain;
    PrimeKind kind = PrimeKind::rational;
    Word p = 0;  ///< residue characteristic
    int f = 1;   ///< residue degree
    int e = 1;   ///< ramification index
    Element generator;
    Word q = 0;  ///< residue size p^f
    /// Split Gaussian primes a+bi: the root r of x^2+1 mod p with a + b r = 0.
    Word split_root = 0;

    std::string label() const;

    friend bool operator==(const PrimeIdealDesc& a, const PrimeIdealDesc& b) {
        return a.domain == b.domain && a.generator == b.generator;
    }
    friend bool operator<(const PrimeIdealDesc& a, const PrimeIdealDesc& b);
};

/// All primes above the rational prime p, with (e, f, q) and generators.
/// Split Gaussian primes are listed as a+bi then a-bi with a > b > 0.
std::vector<PrimeIdealDesc> factor_rational_prime(const DomainId& domain, Word p);

/// The polynomial domain's principal prime (g), g irreducible (made monic).
std::vector<PrimeIdealDesc> factor_rational_prime(const DomainId& domain, const Polynomial& g);

/// The prime ideal generated by `generator`; throws ParameterError if it is not prime.
PrimeIdealDesc prime_from_generator(const DomainId& domain, const Element& generator);

/// Reduction T -> T_p / p^K for one prime and precision, with its ring cached.
class PrimeReduction {
public:
    PrimeReduction(const PrimeIdealDesc& prime, int precision);

    const LocalRingPtr& ring() const { return ring_; }
    const PrimeIdealDesc& prime() const { return prime_; }
    void reduce(const Element& x, std::span<Word> out) const;
    LocalElement reduce(const Element& x) const;

private:
    PrimeIdealDesc prime_;
    LocalRingPtr ring_;
    Word root_ = 0;                     // split Gaussian: root of x^2+1 mod p^K
    std::vector<Word> x_image_;         // polynomial domain: image of x
};

LocalElement reduce_mod_prime_power(const Element& x, const PrimeIdealDesc& prime, int precision);

/// Root r of x^2 + 1 mod p^K congruent to `root_mod_p`, by Hensel lifting.
Word hensel_lift_root(Word root_mod_p, Word p, int precision);

enum class ProjectionKind { integer_mod_p, gaussian_coordinates, gaussian_split, gaussian_ramified, polynomial_mod };

struct ElementaryQuotientIdeal {
    DomainId domain;
    Word p = 0;    ///< characteristic of T/I
    int dim = 0;   ///< dim over F_p of T/I
    std::string label;
    ProjectionKind projection = ProjectionKind::integer_mod_p;
    Word root = 0;                 ///< gaussian_split
    detail::FpPoly modulus;        ///< polynomial_mod: monic generator of I
};

/// Ideals I with aT in I, I proper, T/I elementary abelian (each with an F_p basis).
std::vector<ElementaryQuotientIdeal> elementary_quotient_ideals(const DomainId& domain, const Element& a);

/// Coordinates of x + I in the ideal's basis.
std::vector<Word> residue_vector(const Element& x, const ElementaryQuotientIdeal& ideal);

/// Prime factorization of |n| by trial division (ascending, with multiplicity exponents).
std::vector<std::pair<Word, int>> factor_integer(Word n);

}  // namespace cokernel
