#include "sphform/polyhedra.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

namespace sphform {

namespace {

constexpr double kMatchTol = 1e-6;

FormationState table_vertices(int p, int q)
{
    const double phi = std::numbers::phi;
    const double s3 = std::sqrt(3.0);
    FormationState v;
    auto cube = [&] {
        for (int a : {1, -1})
            for (int b : {1, -1})
                for (int c : {1, -1})
                    v.emplace_back(Vec3(a, b, c) / s3);
    };
    // cyclic shifts of (0, a, b)
    auto rolls = [&](double a, double b, double scale) {
        const Vec3 base(0.0, a, b);
        for (int k = 0; k < 3; ++k)
            v.emplace_back(Vec3(base[(3 - k) % 3], base[(4 - k) % 3], base[(5 - k) % 3]) / scale);
    };

    if (p == 3 && q == 3) {
        v = {Vec3(1, 1, 1) / s3, Vec3(1, -1, -1) / s3, Vec3(-1, 1, -1) / s3, Vec3(-1, -1, 1) / s3};
    } else if (p == 3 && q == 4) {
        v = {Vec3::UnitX(), -Vec3::UnitX(), Vec3::UnitY(), -Vec3::UnitY(), Vec3::UnitZ(), -Vec3::UnitZ()};
    } else if (p == 4 && q == 3) {
        cube();
    } else if (p == 3 && q == 5) {
        const double r = std::sqrt(1.0 + phi * phi);
        for (double a : {1.0, -1.0})
            for (double b : {phi, -phi})
                rolls(a, b, r);
    } else {
        cube();
        for (double a : {1.0 / phi, -1.0 / phi})
            for (double b : {phi, -phi})
                rolls(a, b, s3);
    }
    return v;
}

int nearest(const FormationState& v, const Vec3& x)
{
    int best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (int k = 0; k < static_cast<int>(v.size()); ++k) {
        const double d = (v[static_cast<std::size_t>(k)] - x).norm();
        if (d < bd) {
            bd = d;
            best = k;
        }
    }
    return best;
}

// Relabel shell by shell around the first table vertex.
FormationState shell_order(int p, int q, const FormationState& table)
{
    const int n = static_cast<int>(table.size());
    const double turn = 2.0 * std::numbers::pi / q;
    const Vec3 first = table[0];

    double closest = -2.0;
    for (int k = 1; k < n; ++k)
        closest = std::max(closest, first.dot(table[static_cast<std::size_t>(k)]));
    Vec3 second = first;
    for (int k = 1; k < n; ++k)
        if (std::abs(first.dot(table[static_cast<std::size_t>(k)]) - closest) < 1e-9) {
            second = table[static_cast<std::size_t>(k)];
            break;
        }

    FormationState g{first, second};
    for (int i = 1; i < q; ++i)
        g.push_back(rodrigues(first, i * turn) * second);
    for (int j = 1; j <= std::max(p - q, 0); ++j)
        for (int l = 1; l <= q; ++l)
            g.push_back(rodrigues(g[static_cast<std::size_t>(l)], j * turn) * first);
    for (std::size_t k = 0; static_cast<int>(g.size()) < n; ++k)
        g.push_back(-g[k]);

    FormationState out;
    std::set<int> used;
    for (const Vec3& x : g) {
        const int k = nearest(table, x);
        if ((table[static_cast<std::size_t>(k)] - x).norm() > kMatchTol || !used.insert(k).second)
            throw std::logic_error("vertex labeling failed for {" + std::to_string(p) + "," +
                                   std::to_string(q) + "}");
        out.push_back(table[static_cast<std::size_t>(k)]);
    }
    return out;
}

// Unique partner of every rotated vertex, or empty on failure.
std::vector<int> match_rotated(const Mat3& r, const FormationState& v)
{
    const int n = static_cast<int>(v.size());
    std::vector<int> img(static_cast<std::size_t>(n));
    std::vector<bool> hit(static_cast<std::size_t>(n), false);
    for (int i = 0; i < n; ++i) {
        const Vec3 x = r * v[static_cast<std::size_t>(i)];
        int found = -1;
        for (int k = 0; k < n; ++k) {
            if ((v[static_cast<std::size_t>(k)] - x).norm() < kMatchTol) {
                if (found >= 0)
                    return {};
                found = k;
            }
        }
        if (found < 0 || hit[static_cast<std::size_t>(found)])
            return {};
        hit[static_cast<std::size_t>(found)] = true;
        img[static_cast<std::size_t>(i)] = found;
    }
    return img;
}

}  // namespace

std::string SchlafliSolid::symbol() const
{
    return "{" + std::to_string(p) + "," + std::to_string(q) + "}";
}

SchlafliSolid make_solid(int p, int q)
{
    // 1/p + 1/q > 1/2  <=>  2(p + q) > pq
    if (p < 3 || q < 3 || 2 * (p + q) <= p * q)
        throw std::invalid_argument("not a Platonic solid: {" + std::to_string(p) + "," +
                                    std::to_string(q) + "}");
    SchlafliSolid s;
    s.p = p;
    s.q = q;
    const int d = 4 - (p - 2) * (q - 2);
    s.n_vertices = 4 * p / d;
    s.n_edges = 2 * p * q / d;
    s.n_faces = 4 * q / d;
    s.vertices = shell_order(p, q, table_vertices(p, q));
    return s;
}

SchlafliSolid parse_solid(std::string_view text)
{
    std::string t;
    for (char c : text)
        if (c != '{' && c != '}' && c != ' ')
            t.push_back(c);
    const auto comma = t.find(',');
    int p = 0;
    int q = 0;
    if (comma == std::string::npos)
        throw std::invalid_argument("expected p,q but got '" + std::string(text) + "'");
    const auto r1 = std::from_chars(t.data(), t.data() + comma, p);
    const auto r2 = std::from_chars(t.data() + comma + 1, t.data() + t.size(), q);
    if (r1.ec != std::errc{} || r1.ptr != t.data() + comma || r2.ec != std::errc{} ||
        r2.ptr != t.data() + t.size())
        throw std::invalid_argument("expected p,q but got '" + std::string(text) + "'");
    return make_solid(p, q);
}

std::vector<SchlafliSolid> platonic_solids()
{
    return {make_solid(3, 3), make_solid(3, 4), make_solid(4, 3), make_solid(3, 5), make_solid(5, 3)};
}

Permutation::Permutation(std::vector<int> images)
    : map_(std::move(images))
{
    std::vector<bool> seen(map_.size(), false);
    for (int x : map_) {
        if (x < 0 || x >= size() || seen[static_cast<std::size_t>(x)])
            throw std::invalid_argument("not a bijection");
        seen[static_cast<std::size_t>(x)] = true;
    }
}

Permutation Permutation::identity(int n)
{
    std::vector<int> m(static_cast<std::size_t>(n));
    std::iota(m.begin(), m.end(), 0);
    return Permutation(std::move(m));
}

Permutation Permutation::operator*(const Permutation& rhs) const
{
    if (rhs.size() != size())
        throw std::invalid_argument("permutation size mismatch");
    std::vector<int> m(map_.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        m[i] = rhs(map_[i]);
    return Permutation(std::move(m));
}

Permutation Permutation::inverse() const
{
    std::vector<int> m(map_.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        m[static_cast<std::size_t>(map_[i])] = static_cast<int>(i);
    return Permutation(std::move(m));
}

bool Permutation::is_identity() const
{
    for (std::size_t i = 0; i < map_.size(); ++i)
        if (map_[i] != static_cast<int>(i))
            return false;
    return true;
}

int Permutation::order() const
{
    Permutation p = *this;
    int k = 1;
    while (!p.is_identity()) {
        p = p * *this;
        ++k;
    }
    return k;
}

Eigen::MatrixXi permutation_matrix(const Permutation& sigma)
{
    const int n = sigma.size();
    Eigen::MatrixXi m = Eigen::MatrixXi::Zero(n, n);
    for (int i = 0; i < n; ++i)
        m(i, sigma(i)) = 1;
    return m;
}

std::string cycle_notation(const Permutation& sigma)
{
    std::string out;
    std::vector<bool> done(static_cast<std::size_t>(sigma.size()), false);
    for (int start = 0; start < sigma.size(); ++start) {
        if (done[static_cast<std::size_t>(start)])
            continue;
        out += '(';
        int i = start;
        bool first = true;
        do {
            if (!first)
                out += ',';
            out += std::to_string(i + 1);
            done[static_cast<std::size_t>(i)] = true;
            first = false;
            i = sigma(i);
        } while (i != start);
        out += ')';
    }
    return out;
}

Permutation parse_cycles(std::string_view text, int n)
{
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("bad cycle notation '" + std::string(text) + "': " + why);
    };
    std::vector<int> m(static_cast<std::size_t>(n));
    std::iota(m.begin(), m.end(), 0);
    std::vector<bool> seen(static_cast<std::size_t>(n), false);

    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && text[pos] == ' ')
            ++pos;
    };
    skip_ws();
    while (pos < text.size()) {
        if (text[pos] != '(')
            fail("expected '('");
        ++pos;
        std::vector<int> cycle;
        for (;;) {
            skip_ws();
            int v = 0;
            const auto r = std::from_chars(text.data() + pos, text.data() + text.size(), v);
            if (r.ec != std::errc{})
                fail("expected index");
            pos = static_cast<std::size_t>(r.ptr - text.data());
            if (v < 1 || v > n)
                fail("index " + std::to_string(v) + " out of range");
            if (seen[static_cast<std::size_t>(v - 1)])
                fail("index " + std::to_string(v) + " repeated");
            seen[static_cast<std::size_t>(v - 1)] = true;
            cycle.push_back(v - 1);
            skip_ws();
            if (pos < text.size() && text[pos] == ',') {
                ++pos;
                continue;
            }
            if (pos < text.size() && text[pos] == ')') {
                ++pos;
                break;
            }
            fail("unterminated cycle");
        }
        for (std::size_t k = 0; k < cycle.size(); ++k)
            m[static_cast<std::size_t>(cycle[k])] = cycle[(k + 1) % cycle.size()];
        skip_ws();
    }
    return Permutation(std::move(m));
}

std::vector<Permutation> close_group(const std::vector<Permutation>& generators)
{
    if (generators.empty())
        return {};
    std::set<Permutation> seen{Permutation::identity(generators.front().size())};
    std::vector<Permutation> frontier(seen.begin(), seen.end());
    while (!frontier.empty()) {
        std::vector<Permutation> next;
        for (const auto& a : frontier)
            for (const auto& g : generators) {
                Permutation c = a * g;
                if (seen.insert(c).second)
                    next.push_back(std::move(c));
            }
        frontier = std::move(next);
    }
    return {seen.begin(), seen.end()};
}

SymmetrySet derive_symmetries(const SchlafliSolid& s)
{
    SymmetrySet out;
    out.solid = s;
    std::vector<Permutation> gens;
    for (int i = 0; i < s.n_vertices; ++i) {
        RotationalSymmetry sym;
        sym.rotation = rodrigues(s.vertices[static_cast<std::size_t>(i)], 2.0 * std::numbers::pi / s.q);
        auto img = match_rotated(sym.rotation, s.vertices);
        if (img.empty())
            throw std::runtime_error("symmetry match failed at vertex " + std::to_string(i + 1) +
                                     " of " + s.symbol());
        sym.perm = Permutation(std::move(img));
        sym.vertex_index = i;
        gens.push_back(sym.perm);
        out.symmetries.push_back(std::move(sym));
    }
    out.group = close_group(gens);
    return out;
}

std::vector<RotationalSymmetry> full_rotation_group(const SchlafliSolid& s)
{
    const auto& v = s.vertices;
    const int n = s.n_vertices;
    // reference pair: vertex 0 and its first non-antipodal partner
    int ref = 1;
    while (ref < n && std::abs(v[0].dot(v[static_cast<std::size_t>(ref)])) > 1.0 - 1e-9)
        ++ref;
    const double c0 = v[0].dot(v[static_cast<std::size_t>(ref)]);
    auto frame = [](const Vec3& a, const Vec3& b) {
        const Vec3 e2 = a.cross(b).normalized();
        Mat3 f;
        f.col(0) = a;
        f.col(1) = e2;
        f.col(2) = a.cross(e2);
        return f;
    };
    const Mat3 f0 = frame(v[0], v[static_cast<std::size_t>(ref)]);

    std::vector<RotationalSymmetry> out;
    std::set<Permutation> seen;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b || std::abs(v[static_cast<std::size_t>(a)].dot(v[static_cast<std::size_t>(b)]) - c0) > 1e-9)
                continue;
            const Mat3 r = frame(v[static_cast<std::size_t>(a)], v[static_cast<std::size_t>(b)]) * f0.transpose();
            auto img = match_rotated(r, v);
            if (img.empty())
                continue;
            Permutation p(std::move(img));
            if (!seen.insert(p).second)
                continue;
            out.push_back({r, std::move(p), -1});
        }
    std::sort(out.begin(), out.end(),
              [](const RotationalSymmetry& x, const RotationalSymmetry& y) { return x.perm < y.perm; });
    return out;
}

std::vector<int> greedy_match(const FormationState& from, const FormationState& to)
{
    const std::size_t n = from.size();
    if (to.size() != n)
        throw std::invalid_argument("greedy_match: size mismatch");
    std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
    pairs.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            pairs.emplace_back((from[i] - to[k]).squaredNorm(), i, k);
    std::sort(pairs.begin(), pairs.end());
    std::vector<int> img(n, -1);
    std::vector<bool> taken(n, false);
    std::size_t assigned = 0;
    for (const auto& [d, i, k] : pairs) {
        if (img[i] >= 0 || taken[k])
            continue;
        img[i] = static_cast<int>(k);
        taken[k] = true;
        if (++assigned == n)
            break;
    }
    return img;
}

MembershipReport formation_membership(const FormationState& state, const SchlafliSolid& s, double tol)
{
    MembershipReport rep;
    if (static_cast<int>(state.size()) != s.n_vertices) {
        rep.residual = std::numeric_limits<double>::infinity();
        return rep;
    }
    for (std::size_t m = 0; m < state.size() && !rep.nondegenerate; ++m)
        for (std::size_t k = m + 1; k < state.size(); ++k)
            if (state[m].cross(state[k]).norm() > tol) {
                rep.nondegenerate = true;
                break;
            }

    for (const Vec3& axis : state) {
        const Mat3 r = rodrigues(axis.normalized(), 2.0 * std::numbers::pi / s.q);
        FormationState rotated;
        rotated.reserve(state.size());
        for (const Vec3& g : state)
            rotated.push_back(r * g);
        const auto img = greedy_match(rotated, state);
        for (std::size_t j = 0; j < state.size(); ++j)
            rep.residual = std::max(rep.residual,
                                    (rotated[j] - state[static_cast<std::size_t>(img[j])]).norm());
    }
    rep.member = rep.nondegenerate && rep.residual <= tol;
    return rep;
}

}  // namespace sphform
