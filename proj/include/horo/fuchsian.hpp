#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "horo/psl2.hpp"

namespace horo
{

class ResourceError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Sequence of generator indices; empty is the identity.
using Word = std::vector<std::uint8_t>;

std::string word_to_string(const Word& w);
Word word_from_string(const std::string& s);

struct FuchsianGroup {
    std::string name;
    // Generator k + n/2 is the inverse of generator k.
    std::vector<GroupElement> generators;
    Word relator;
    PointH2 basepoint{0, 1};
    // Circumradius of the Dirichlet domain at the basepoint when the
    // generators are exactly its side pairings. Enables completeness
    // certificates for enumerated balls.
    std::optional<double> cover_radius;

    std::size_t inverse_index(std::size_t k) const
    {
        return (k + generators.size() / 2) % generators.size();
    }
};

// Validates the group invariants; throws DomainError with a diagnostic.
void validate_group(const FuchsianGroup& group);

GroupElement evaluate_word(const FuchsianGroup& group, const Word& w);

// The genus-2 Bolza group: g_k = r_k g_0 r_k^-1, r_k the rotation about i by
// k pi/4, relator g0 g3 g6 g1 g4 g7 g2 g5.
FuchsianGroup bolza_group();
std::shared_ptr<const FuchsianGroup> shared_bolza_group();

// Bolza constants in closed form.
inline const double bolza_generator_trace = 2 + 2 * 1.4142135623730951;
double bolza_systole();

struct BallElement {
    GroupElement g;
    Word word;
    double displacement = 0;
};

struct BallOptions {
    int max_word_len = 3;
    double max_displacement = std::numeric_limits<double>::infinity();
    std::size_t element_cap = 5'000'000;
};

// Enumerated elements of Γ, sorted by displacement d_H(i, γ i), identity first.
struct FuchsianBall {
    std::vector<BallElement> elements;
    int word_length_limit = 0;
    double displacement_limit = std::numeric_limits<double>::infinity();
    // Every γ with displacement <= complete_radius is in the ball. Zero when
    // the group carries no covering radius.
    double complete_radius = 0;
    std::optional<double> cover_radius;
    std::size_t explored = 0;

    std::size_t size() const { return elements.size(); }
    double min_nontrivial_displacement() const;
};

FuchsianBall enumerate_ball(const FuchsianGroup& group, const BallOptions& options);

// Line-oriented text cache of a ball.
void write_ball(std::ostream& os, const FuchsianBall& ball);
FuchsianBall read_ball(std::istream& is);

struct ConstantEstimates {
    double eps_star_lb = 0;
    double sigma0_lb = 0;
    int word_length_used = 0;
    double complete_radius = 0;
    // Ball is complete up to 2R + min translation length, so the ball minimum
    // is the minimum over all of Γ \ {e}.
    bool certified = false;
};

// min over non-identity ball elements of trace - 2. Throws DomainError on {e}.
ConstantEstimates estimate_eps_star(const FuchsianBall& ball);
// 2 arccosh((2 + eps) / 2) / sqrt(2).
double estimate_sigma0(const ConstantEstimates& estimates);
ConstantEstimates estimate_constants(const FuchsianBall& ball);

struct QuotientPoint {
    GroupElement rep;
    std::shared_ptr<const FuchsianGroup> group;
};

QuotientPoint project(const GroupElement& g, std::shared_ptr<const FuchsianGroup> group);

struct Reduction {
    GroupElement gamma;   // applied on the left
    GroupElement reduced; // gamma * g, with reduced·i in the Dirichlet domain
    int steps = 0;
};

// Greedy side-pairing reduction of g·i towards the basepoint.
Reduction reduce_to_domain(const GroupElement& g, const FuchsianGroup& group);

struct QuotientDistance {
    DistanceBracket bracket;
    // false: ball too small to certify lo, bracket is hi-only and lo = 0.
    bool lo_certified = false;
    // argmin of hi: d_G(g1, gamma g2) is the reported hi.
    GroupElement gamma;
};

QuotientDistance quotient_dist(const QuotientPoint& x, const QuotientPoint& y,
                               const FuchsianBall& ball);

// Points are declared equal when the quotient distance upper bound is below 1e-9.
bool same_point(const QuotientPoint& x, const QuotientPoint& y, const FuchsianBall& ball);

struct OrbitWitness {
    double tau = 0;
    GroupElement gamma;
};

// Semi-decision for y = θ_τ(x): finds γ in the ball with g1^-1 γ g2 = b_τ
// within tol. No witness is not a proof of distinct orbits.
std::optional<OrbitWitness> same_orbit_witness(const QuotientPoint& x, const QuotientPoint& y,
                                               const FuchsianBall& ball, double tol);

} // namespace horo
