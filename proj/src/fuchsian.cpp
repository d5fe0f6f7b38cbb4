#include "horo/fuchsian.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace horo
{

namespace
{

constexpr double dedup_tol = 1e-9;
constexpr double cell_size = 1e-6;

std::string fmt17(double v)
{
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& s)
{
    if (s == "inf") {
        return std::numeric_limits<double>::infinity();
    }
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) {
        throw DomainError("malformed number in ball file: " + s);
    }
    return v;
}

std::uint64_t mix(std::uint64_t h, std::int64_t v)
{
    std::uint64_t x = h ^ (static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Tolerance-aware dedup of group elements. Cells of side 1e-6 per entry; a
// lookup probes every cell the value could fall into within dedup_tol.
class ElementIndex
{
public:
    explicit ElementIndex(const std::vector<GroupElement>& store) : store_(store) {}

    std::optional<std::uint32_t> find(const GroupElement& g) const
    {
        const double v[4] = {g.a(), g.b(), g.c(), g.d()};
        std::int64_t lo[4], hi[4];
        for (int i = 0; i < 4; ++i) {
            lo[i] = cell(v[i] - dedup_tol);
            hi[i] = cell(v[i] + dedup_tol);
        }
        std::int64_t k[4];
        for (k[0] = lo[0]; k[0] <= hi[0]; ++k[0]) {
            for (k[1] = lo[1]; k[1] <= hi[1]; ++k[1]) {
                for (k[2] = lo[2]; k[2] <= hi[2]; ++k[2]) {
                    for (k[3] = lo[3]; k[3] <= hi[3]; ++k[3]) {
                        auto it = heads_.find(key(k));
                        for (std::uint32_t n = it == heads_.end() ? none : it->second; n != none;
                             n = next_[n]) {
                            if (entry_distance(store_[n], g) <= dedup_tol) {
                                return n;
                            }
                        }
                    }
                }
            }
        }
        return std::nullopt;
    }

    void insert(std::uint32_t idx)
    {
        const GroupElement& g = store_[idx];
        const std::int64_t k[4] = {cell(g.a()), cell(g.b()), cell(g.c()), cell(g.d())};
        auto [it, inserted] = heads_.try_emplace(key(k), idx);
        if (next_.size() <= idx) {
            next_.resize(idx + 1, none);
        }
        next_[idx] = inserted ? none : it->second;
        it->second = idx;
    }

private:
    static constexpr std::uint32_t none = 0xffffffffU;

    static std::int64_t cell(double x) { return static_cast<std::int64_t>(std::floor(x / cell_size)); }
    static std::uint64_t key(const std::int64_t k[4])
    {
        std::uint64_t h = 0;
        for (int i = 0; i < 4; ++i) {
            h = mix(h, k[i]);
        }
        return h;
    }

    const std::vector<GroupElement>& store_;
    std::unordered_map<std::uint64_t, std::uint32_t> heads_;
    std::vector<std::uint32_t> next_;
};

struct Node {
    std::uint32_t parent;
    std::uint8_t letter;
    std::uint8_t depth;
    double disp;
};

Word word_of(const std::vector<Node>& nodes, std::uint32_t idx)
{
    Word w;
    while (idx != 0) {
        w.push_back(nodes[idx].letter);
        idx = nodes[idx].parent;
    }
    std::reverse(w.begin(), w.end());
    return w;
}

} // namespace

std::string word_to_string(const Word& w)
{
    if (w.empty()) {
        return "e";
    }
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) {
            out += '.';
        }
        out += std::to_string(w[i]);
    }
    return out;
}

Word word_from_string(const std::string& s)
{
    Word w;
    if (s == "e") {
        return w;
    }
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, '.')) {
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
            throw DomainError("malformed word: " + s);
        }
        const int v = std::stoi(tok);
        if (v > 255) {
            throw DomainError("generator index out of range in word: " + s);
        }
        w.push_back(static_cast<std::uint8_t>(v));
    }
    return w;
}

GroupElement evaluate_word(const FuchsianGroup& group, const Word& w)
{
    GroupElement g;
    for (auto k : w) {
        if (k >= group.generators.size()) {
            throw DomainError("word letter " + std::to_string(k) + " has no generator");
        }
        g = compose(g, group.generators[k]);
    }
    return g;
}

void validate_group(const FuchsianGroup& group)
{
    const std::size_t n = group.generators.size();
    if (n == 0 || n % 2 != 0) {
        throw DomainError("group needs an even, non-zero number of generators");
    }
    for (std::size_t k = 0; k < n; ++k) {
        const double tr = trace(group.generators[k]);
        if (!(tr > 2)) {
            throw DomainError("generator " + std::to_string(k) + " is not hyperbolic (trace " +
                              fmt17(tr) + ")");
        }
        const double pair_err =
            entry_distance(group.generators[group.inverse_index(k)], inverse(group.generators[k]));
        if (pair_err > 1e-9) {
            throw DomainError("generator " + std::to_string(group.inverse_index(k)) +
                              " is not the inverse of generator " + std::to_string(k) +
                              " (error " + fmt17(pair_err) + ")");
        }
    }
    for (auto k : group.relator) {
        if (k >= n) {
            throw DomainError("relator references a missing generator");
        }
    }
    const double rel_err = entry_distance(evaluate_word(group, group.relator), GroupElement{});
    if (rel_err > 1e-9) {
        throw DomainError("relator " + word_to_string(group.relator) +
                          " does not close (error " + fmt17(rel_err) +
                          "); wrong side-pairing rotation offset?");
    }
}

double bolza_systole() { return 2 * std::acosh(1 + std::sqrt(2.0)); }

FuchsianGroup bolza_group()
{
    const double r2 = std::sqrt(2.0);
    const double diag = 1 + r2;
    const double off = std::sqrt(2 + 2 * r2);
    const GroupElement g0 = GroupElement::canonicalize({diag, off, off, diag});

    FuchsianGroup group;
    group.name = "bolza";
    for (int k = 0; k < 8; ++k) {
        const GroupElement rot = rotation_element(k * M_PI / 4);
        group.generators.push_back(compose(compose(rot, g0), inverse(rot)));
    }
    group.relator = {0, 3, 6, 1, 4, 7, 2, 5};
    // regular octagon with interior angles pi/4: cosh R = cot^2(pi/8)
    group.cover_radius = std::acosh(3 + 2 * r2);
    validate_group(group);
    return group;
}

std::shared_ptr<const FuchsianGroup> shared_bolza_group()
{
    static const auto group = std::make_shared<const FuchsianGroup>(bolza_group());
    return group;
}

double FuchsianBall::min_nontrivial_displacement() const
{
    return elements.size() > 1 ? elements[1].displacement
                               : std::numeric_limits<double>::infinity();
}

FuchsianBall enumerate_ball(const FuchsianGroup& group, const BallOptions& options)
{
    if (options.max_word_len < 0) {
        throw DomainError("max_word_len must be >= 0");
    }
    if (options.max_word_len > 255) {
        throw DomainError("max_word_len must be <= 255");
    }
    const double inf = std::numeric_limits<double>::infinity();
    double max_step = 0;
    for (const auto& gen : group.generators) {
        max_step = std::max(max_step, displacement(gen));
    }
    const double prune = options.max_displacement + 2 * max_step;

    std::vector<GroupElement> store{GroupElement{}};
    std::vector<Node> nodes{{0, 0, 0, 0.0}};
    ElementIndex index(store);
    index.insert(0);

    const std::size_t ngen = group.generators.size();
    std::vector<std::uint32_t> frontier{0};
    for (int depth = 0; depth < options.max_word_len && !frontier.empty(); ++depth) {
        std::vector<std::uint32_t> next;
        for (auto idx : frontier) {
            if (nodes[idx].disp > prune) {
                continue;
            }
            for (std::size_t k = 0; k < ngen; ++k) {
                if (idx != 0 && group.inverse_index(nodes[idx].letter) == k) {
                    continue;
                }
                const GroupElement child = compose(store[idx], group.generators[k]);
                if (index.find(child)) {
                    continue;
                }
                if (store.size() >= options.element_cap) {
                    throw ResourceError("ball enumeration exceeded the element cap of " +
                                        std::to_string(options.element_cap));
                }
                const auto child_idx = static_cast<std::uint32_t>(store.size());
                store.push_back(child);
                nodes.push_back({idx, static_cast<std::uint8_t>(k),
                                 static_cast<std::uint8_t>(depth + 1), displacement(child)});
                index.insert(child_idx);
                next.push_back(child_idx);
            }
        }
        frontier = std::move(next);
    }

    FuchsianBall ball;
    ball.word_length_limit = options.max_word_len;
    ball.displacement_limit = options.max_displacement;
    ball.cover_radius = group.cover_radius;
    ball.explored = store.size();

    if (group.cover_radius) {
        // Closest element one letter beyond the word-length limit.
        double frontier_min = inf;
        for (auto idx : frontier) {
            if (nodes[idx].disp > prune) {
                continue;
            }
            for (std::size_t k = 0; k < ngen; ++k) {
                const GroupElement child = compose(store[idx], group.generators[k]);
                if (!index.find(child)) {
                    frontier_min = std::min(frontier_min, displacement(child));
                }
            }
        }
        const double r = *group.cover_radius;
        ball.complete_radius =
            std::max(0.0, std::min({options.max_displacement, frontier_min - r, prune - r}));
    }

    for (std::uint32_t idx = 0; idx < store.size(); ++idx) {
        if (nodes[idx].disp <= options.max_displacement) {
            ball.elements.push_back({store[idx], word_of(nodes, idx), nodes[idx].disp});
        }
    }
    std::sort(ball.elements.begin(), ball.elements.end(),
              [](const BallElement& x, const BallElement& y) {
                  if (x.displacement != y.displacement) {
                      return x.displacement < y.displacement;
                  }
                  if (x.word.size() != y.word.size()) {
                      return x.word.size() < y.word.size();
                  }
                  return x.word < y.word;
              });
    return ball;
}

void write_ball(std::ostream& os, const FuchsianBall& ball)
{
    os << "# horolab fuchsian ball: word a b c d displacement\n";
    os << "schema_version 1\n";
    os << "word_length_limit " << ball.word_length_limit << '\n';
    os << "displacement_limit " << fmt17(ball.displacement_limit) << '\n';
    os << "complete_radius " << fmt17(ball.complete_radius) << '\n';
    os << "cover_radius " << (ball.cover_radius ? fmt17(*ball.cover_radius) : "none") << '\n';
    os << "explored " << ball.explored << '\n';
    os << "count " << ball.elements.size() << '\n';
    for (const auto& e : ball.elements) {
        os << word_to_string(e.word) << ' ' << fmt17(e.g.a()) << ' ' << fmt17(e.g.b()) << ' '
           << fmt17(e.g.c()) << ' ' << fmt17(e.g.d()) << ' ' << fmt17(e.displacement) << '\n';
    }
}

FuchsianBall read_ball(std::istream& is)
{
    FuchsianBall ball;
    std::string line;
    std::size_t count = 0;
    bool have_count = false;
    bool have_version = false;
    while (!have_count && std::getline(is, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream ls(line);
        std::string key, value;
        ls >> key >> value;
        if (key == "schema_version") {
            if (value != "1") {
                throw DomainError("unsupported ball schema_version " + value);
            }
            have_version = true;
        } else if (key == "word_length_limit") {
            ball.word_length_limit = std::stoi(value);
        } else if (key == "displacement_limit") {
            ball.displacement_limit = parse_double(value);
        } else if (key == "complete_radius") {
            ball.complete_radius = parse_double(value);
        } else if (key == "cover_radius") {
            if (value != "none") {
                ball.cover_radius = parse_double(value);
            }
        } else if (key == "explored") {
            ball.explored = std::stoull(value);
        } else if (key == "count") {
            count = std::stoull(value);
            have_count = true;
        } else {
            throw DomainError("unknown ball header key: " + key);
        }
    }
    if (!have_version || !have_count) {
        throw DomainError("ball file is missing its header");
    }
    ball.elements.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (!std::getline(is, line)) {
            throw DomainError("ball file truncated");
        }
        std::istringstream ls(line);
        std::string w, a, b, c, d, disp;
        if (!(ls >> w >> a >> b >> c >> d >> disp)) {
            throw DomainError("malformed ball line: " + line);
        }
        ball.elements.push_back(
            {GroupElement::canonicalize({parse_double(a), parse_double(b), parse_double(c),
                                         parse_double(d)}),
             word_from_string(w), parse_double(disp)});
    }
    return ball;
}

ConstantEstimates estimate_eps_star(const FuchsianBall& ball)
{
    double min_excess = std::numeric_limits<double>::infinity();
    for (const auto& e : ball.elements) {
        if (!e.word.empty()) {
            min_excess = std::min(min_excess, trace(e.g) - 2);
        }
    }
    if (std::isinf(min_excess)) {
        throw DomainError("ball has no non-identity element; cannot estimate eps_star");
    }
    ConstantEstimates out;
    out.eps_star_lb = min_excess;
    out.word_length_used = ball.word_length_limit;
    out.complete_radius = ball.complete_radius;
    if (ball.cover_radius) {
        const double min_translation = 2 * std::acosh(1 + min_excess / 2);
        out.certified = ball.complete_radius >= min_translation + 2 * *ball.cover_radius;
    }
    return out;
}

double estimate_sigma0(const ConstantEstimates& estimates)
{
    return 2 * std::acosh((2 + estimates.eps_star_lb) / 2) / orbit_lipschitz;
}

ConstantEstimates estimate_constants(const FuchsianBall& ball)
{
    ConstantEstimates out = estimate_eps_star(ball);
    out.sigma0_lb = estimate_sigma0(out);
    return out;
}

QuotientPoint project(const GroupElement& g, std::shared_ptr<const FuchsianGroup> group)
{
    return {g, std::move(group)};
}

Reduction reduce_to_domain(const GroupElement& g, const FuchsianGroup& group)
{
    Reduction out{GroupElement{}, g, 0};
    double current = displacement(g);
    for (;;) {
        std::size_t best_k = 0;
        double best = current;
        GroupElement best_g;
        for (std::size_t k = 0; k < group.generators.size(); ++k) {
            const GroupElement cand = compose(group.generators[k], out.reduced);
            const double d = displacement(cand);
            if (d < best) {
                best = d;
                best_k = k;
                best_g = cand;
            }
        }
        if (!(best < current - 1e-12)) {
            return out;
        }
        out.reduced = best_g;
        out.gamma = compose(group.generators[best_k], out.gamma);
        current = best;
        if (++out.steps > 100000) {
            throw ResourceError("representative reduction did not terminate");
        }
    }
}

namespace
{

struct Scan {
    DistanceBracket bracket{std::numeric_limits<double>::infinity(),
                            std::numeric_limits<double>::infinity()};
    GroupElement gamma;
    bool certified = false;
};

Scan scan_ball(const GroupElement& g1, const GroupElement& g2, const FuchsianBall& ball)
{
    const double d1 = displacement(g1);
    const double d2 = displacement(g2);
    Scan out;
    for (const auto& e : ball.elements) {
        // Every γ from here on has dist_lower >= this, and the list is sorted.
        if ((e.displacement - d1 - d2) / orbit_lipschitz > out.bracket.hi) {
            break;
        }
        const DistanceBracket b = dist_bracket(g1, compose(e.g, g2));
        if (b.hi < out.bracket.hi) {
            out.bracket.hi = b.hi;
            out.gamma = e.g;
        }
        out.bracket.lo = std::min(out.bracket.lo, b.lo);
    }
    out.certified = ball.complete_radius >= orbit_lipschitz * out.bracket.hi + d1 + d2;
    return out;
}

} // namespace

QuotientDistance quotient_dist(const QuotientPoint& x, const QuotientPoint& y,
                               const FuchsianBall& ball)
{
    if (x.group != y.group) {
        throw DomainError("quotient_dist: points belong to different groups");
    }
    if (ball.elements.empty()) {
        throw DomainError("quotient_dist: empty ball");
    }
    Scan raw = scan_ball(x.rep, y.rep, ball);
    QuotientDistance out{raw.bracket, raw.certified, raw.gamma};
    if (!raw.certified && x.group) {
        const Reduction rx = reduce_to_domain(x.rep, *x.group);
        const Reduction ry = reduce_to_domain(y.rep, *y.group);
        const Scan red = scan_ball(rx.reduced, ry.reduced, ball);
        if (red.bracket.hi < out.bracket.hi) {
            out.bracket.hi = red.bracket.hi;
            // d(γx g1, γ' γy g2) = d(g1, γx^-1 γ' γy g2)
            out.gamma = compose(compose(inverse(rx.gamma), red.gamma), ry.gamma);
        }
        if (red.certified) {
            out.lo_certified = true;
            out.bracket.lo = std::min(red.bracket.lo, out.bracket.hi);
        }
    }
    if (!out.lo_certified) {
        out.bracket.lo = 0;
    }
    return out;
}

bool same_point(const QuotientPoint& x, const QuotientPoint& y, const FuchsianBall& ball)
{
    return quotient_dist(x, y, ball).bracket.hi < 1e-9;
}

std::optional<OrbitWitness> same_orbit_witness(const QuotientPoint& x, const QuotientPoint& y,
                                               const FuchsianBall& ball, double tol)
{
    const GroupElement inv1 = inverse(x.rep);
    for (const auto& e : ball.elements) {
        const GroupElement k = compose(compose(inv1, e.g), y.rep);
        if (std::abs(k.c()) < tol && std::abs(k.a() - 1) < tol && std::abs(k.d() - 1) < tol) {
            return OrbitWitness{k.b(), e.g};
        }
    }
    return std::nullopt;
}

} // namespace horo
