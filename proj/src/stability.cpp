#include "sphform/stability.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace sphform {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Null space with an absolute singular-value threshold.
template <typename Matrix>
Matrix null_space_abs(const Matrix& m, double abs_tol)
{
    const Eigen::Index n = m.cols();
    if (m.rows() == 0)
        return Matrix::Identity(n, n);
    if (n == 0)
        return Matrix(0, 0);
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    Eigen::Index rank = 0;
    while (rank < s.size() && s[rank] > abs_tol)
        ++rank;
    return svd.matrixV().rightCols(n - rank);
}

template <typename Matrix>
Matrix orthonormal_columns(const Matrix& m, Eigen::Index keep)
{
    if (keep == 0 || m.cols() == 0)
        return Matrix(m.rows(), 0);
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU);
    return svd.matrixU().leftCols(keep);
}

Eigen::Index numerical_rank(const Eigen::MatrixXd& m, double rel_tol)
{
    if (m.size() == 0)
        return 0;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    if (s[0] <= 1e-300)
        return 0;
    Eigen::Index r = 0;
    while (r < s.size() && s[r] > rel_tol * s[0])
        ++r;
    return r;
}

bool hurwitz(const std::vector<std::complex<double>>& spec, double tol)
{
    return std::all_of(spec.begin(), spec.end(), [tol](auto z) { return z.real() < -tol; });
}

}  // namespace

Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, double rel_tol)
{
    if (m.rows() == 0 || m.size() == 0)
        return Eigen::MatrixXd::Identity(m.cols(), m.cols());
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    const double top = svd.singularValues()[0];
    return null_space_abs<Eigen::MatrixXd>(m, top > 1e-300 ? rel_tol * top : 0.0);
}

void require_full_row_rank(const Eigen::MatrixXd& F, double rel_tol)
{
    for (Eigen::Index k = 1; k <= F.rows(); ++k)
        if (numerical_rank(F.topRows(k), rel_tol) < k)
            throw std::invalid_argument("constraint matrix is rank deficient at row " + std::to_string(k));
}

InvariantSubspaceSolver::InvariantSubspaceSolver(Eigen::MatrixXd A, Tolerances tol)
    : A_(std::move(A))
    , tol_(tol)
{
    const Eigen::Index n = A_.rows();
    if (A_.cols() != n)
        throw std::invalid_argument("system matrix must be square");
    if (n == 0)
        return;
    const double scale = std::max(A_.norm(), 1.0);
    const double ctol = tol_.cluster_rel * scale;

    Eigen::EigenSolver<Eigen::MatrixXd> es(A_);
    const Eigen::VectorXcd w = es.eigenvalues();
    const Eigen::MatrixXcd vecs = es.eigenvectors();

    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (used[static_cast<std::size_t>(i)])
            continue;
        std::vector<Eigen::Index> members;
        for (Eigen::Index j = i; j < n; ++j)
            if (!used[static_cast<std::size_t>(j)] && std::abs(w[j] - w[i]) < ctol) {
                used[static_cast<std::size_t>(j)] = true;
                members.push_back(j);
            }
        std::complex<double> lam = 0.0;
        for (auto j : members)
            lam += w[j];
        lam /= static_cast<double>(members.size());
        // conjugate clusters contribute the same real subspace
        if (lam.imag() < -ctol)
            continue;
        Block b;
        b.real = std::abs(lam.imag()) <= ctol;
        if (b.real)
            lam = lam.real();
        b.eigenvalue = lam;

        const auto k = static_cast<Eigen::Index>(members.size());
        const Eigen::MatrixXcd shifted = A_.cast<std::complex<double>>() -
                                         lam * Eigen::MatrixXcd::Identity(n, n);
        Eigen::MatrixXcd e(n, k);
        for (Eigen::Index c = 0; c < k; ++c)
            e.col(c) = vecs.col(members[static_cast<std::size_t>(c)]);
        Eigen::BDCSVD<Eigen::MatrixXcd> esvd(e, Eigen::ComputeThinU);
        const bool full = esvd.singularValues()[k - 1] > 1e-8 * esvd.singularValues()[0];
        if (full && (shifted * esvd.matrixU()).norm() < 1e-6 * scale) {
            b.basis = esvd.matrixU();
        } else {
            // defective cluster: grow ker (A - lam)^j until it reaches the multiplicity
            Eigen::MatrixXcd basis = null_space_abs<Eigen::MatrixXcd>(shifted, 1e-7 * scale);
            while (basis.cols() < k) {
                Eigen::MatrixXcd aug(n, n + basis.cols());
                aug << shifted, -basis;
                const Eigen::MatrixXcd pre = null_space_abs<Eigen::MatrixXcd>(aug, 1e-7 * scale).topRows(n);
                Eigen::MatrixXcd both(n, basis.cols() + pre.cols());
                both << basis, pre;
                Eigen::BDCSVD<Eigen::MatrixXcd> bsvd(both, Eigen::ComputeThinU);
                Eigen::Index r = 0;
                while (r < bsvd.singularValues().size() && bsvd.singularValues()[r] > 1e-8)
                    ++r;
                if (r <= basis.cols())
                    break;
                basis = bsvd.matrixU().leftCols(std::min(r, k));
            }
            b.basis = basis;
        }
        b.restricted = b.basis.adjoint() * A_.cast<std::complex<double>>() * b.basis;
        blocks_.push_back(std::move(b));
    }
}

InvariantSubspaceBasis InvariantSubspaceSolver::solve(const Eigen::MatrixXd& F) const
{
    const Eigen::Index n = A_.rows();
    if (F.rows() > 0 && F.cols() != n)
        throw std::invalid_argument("constraint matrix has wrong column count");
    if (F.rows() > 0)
        require_full_row_rank(F, tol_.rank_rel);
    const double scale = std::max(A_.norm(), 1.0);
    Eigen::MatrixXcd fs;
    if (F.rows() > 0)
        fs = (F / F.norm()).cast<std::complex<double>>();

    std::vector<Eigen::MatrixXd> parts;
    Eigen::Index dim = 0;
    for (const Block& b : blocks_) {
        const Eigen::Index k = b.basis.cols();
        if (k == 0)
            continue;
        // fixed point V <- V cap A^-1 V inside the eigenspace, starting from ker F
        Eigen::MatrixXcd q = F.rows() > 0 ? null_space_abs<Eigen::MatrixXcd>(fs * b.basis, tol_.rank_rel)
                                          : Eigen::MatrixXcd::Identity(k, k);
        while (q.cols() > 0) {
            const Eigen::MatrixXcd out_of = b.restricted * q - q * (q.adjoint() * b.restricted * q);
            const Eigen::MatrixXcd keep = null_space_abs<Eigen::MatrixXcd>(out_of, tol_.rank_rel * scale);
            if (keep.cols() == q.cols())
                break;
            q = keep.cols() > 0 ? Eigen::MatrixXcd(q * keep) : Eigen::MatrixXcd(k, 0);
        }
        if (q.cols() == 0)
            continue;
        const Eigen::MatrixXcd z = b.basis * q;
        parts.push_back(z.real());
        parts.push_back(z.imag());
        dim += b.real ? q.cols() : 2 * q.cols();
    }

    Eigen::MatrixXd stacked(n, 0);
    for (const auto& p : parts) {
        Eigen::MatrixXd next(n, stacked.cols() + p.cols());
        next << stacked, p;
        stacked = std::move(next);
    }
    InvariantSubspaceBasis out;
    out.T1 = orthonormal_columns<Eigen::MatrixXd>(stacked, dim).transpose();

    if (F.rows() > 0) {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(F.transpose());
        out.T3 = (qr.householderQ() * Eigen::MatrixXd::Identity(n, F.rows())).transpose();
    } else {
        out.T3 = Eigen::MatrixXd(0, n);
    }
    Eigen::MatrixXd known(out.T1.rows() + out.T3.rows(), n);
    known << out.T1, out.T3;
    out.T2 = null_space_abs<Eigen::MatrixXd>(known, 1e-8).transpose();

    if (out.T1.rows() > 0) {
        const Eigen::MatrixXd image = A_ * out.T1.transpose();
        out.invariance_residual = (image - out.T1.transpose() * (out.T1 * image)).norm();
    }
    return out;
}

InvariantSubspaceBasis max_invariant_subspace(const Eigen::MatrixXd& A, const Eigen::MatrixXd& F, Tolerances tol)
{
    return InvariantSubspaceSolver(A, tol).solve(F);
}

std::vector<std::complex<double>> sorted_eigenvalues(const Eigen::MatrixXd& m)
{
    std::vector<std::complex<double>> out;
    if (m.rows() == 0)
        return out;
    const Eigen::VectorXcd w = m.eigenvalues();
    out.assign(w.data(), w.data() + w.size());
    std::sort(out.begin(), out.end(), [](auto a, auto b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return out;
}

RestrictedStability restricted_stability_linear(const RestrictedLinearProblem& prob, Tolerances tol)
{
    const auto basis = max_invariant_subspace(prob.A, prob.F, tol);
    RestrictedStability out;
    out.invariant_dimension = basis.dimension();
    out.spectrum = sorted_eigenvalues(basis.T1 * prob.A * basis.T1.transpose());
    out.stable = hurwitz(out.spectrum, tol.hurwitz);
    return out;
}

bool observability_check(const Eigen::MatrixXd& A, const Eigen::MatrixXd& F, Tolerances tol)
{
    const auto basis = max_invariant_subspace(A, F, tol);
    const Eigen::Index s = basis.T2.rows();
    if (s == 0)
        return true;
    const Eigen::MatrixXd a22 = basis.T2 * A * basis.T2.transpose();
    const Eigen::MatrixXd c = basis.T3 * A * basis.T2.transpose();
    Eigen::MatrixXd obs(c.rows() * s, s);
    Eigen::MatrixXd blk = c;
    for (Eigen::Index k = 0; k < s; ++k) {
        obs.middleRows(k * c.rows(), c.rows()) = blk;
        blk = blk * a22;
    }
    return numerical_rank(obs, tol.rank_rel) == s;
}

std::vector<int> invertible_trailing_columns(const Eigen::MatrixXd& F, double rel_tol)
{
    const auto n = static_cast<int>(F.cols());
    const auto m = static_cast<int>(F.rows());
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    if (m == 0)
        return order;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(F);
    qr.setThreshold(rel_tol);
    if (qr.rank() < m)
        throw std::invalid_argument("constraint matrix has no invertible column block");
    const auto& perm = qr.colsPermutation().indices();
    std::vector<int> pivots(perm.data(), perm.data() + m);
    std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
    for (int c : pivots)
        is_pivot[static_cast<std::size_t>(c)] = true;
    order.clear();
    for (int c = 0; c < n; ++c)
        if (!is_pivot[static_cast<std::size_t>(c)])
            order.push_back(c);
    order.insert(order.end(), pivots.begin(), pivots.end());
    return order;
}

Eigen::MatrixXd place_observer_poles(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c,
                                     const std::vector<double>& poles, unsigned seed)
{
    const Eigen::Index s = a.rows();
    const Eigen::Index m = c.rows();
    if (static_cast<Eigen::Index>(poles.size()) != s)
        throw std::invalid_argument("need one pole per state");
    if (s == 0)
        return Eigen::MatrixXd(0, m);

    // dual problem: eig(at + bt G) with at = a^T, bt = c^T, then K = G^T
    const Eigen::MatrixXd at = a.transpose();
    const Eigen::MatrixXd bt = c.transpose();
    std::mt19937 rng(seed);
    std::normal_distribution<double> n01;

    std::vector<double> sorted = poles;
    std::sort(sorted.begin(), sorted.end());
    for (int attempt = 0; attempt < 50; ++attempt) {
        Eigen::MatrixXd g0 = Eigen::MatrixXd::Zero(m, s);
        if (attempt > 0)
            g0 = g0.unaryExpr([&](double) { return n01(rng); });
        Eigen::VectorXd mix(m);
        for (Eigen::Index k = 0; k < m; ++k)
            mix[k] = n01(rng);
        const Eigen::MatrixXd a1 = at + bt * g0;
        const Eigen::VectorXd b = bt * mix;

        Eigen::MatrixXd ctrb(s, s);
        Eigen::VectorXd col = b;
        for (Eigen::Index k = 0; k < s; ++k) {
            ctrb.col(k) = col;
            col = a1 * col;
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(ctrb);
        if (lu.rank() < s)
            continue;
        // Ackermann: k^T = e_s^T ctrb^-1 p(a1)
        Eigen::MatrixXd pa = Eigen::MatrixXd::Identity(s, s);
        for (double p : poles)
            pa = pa * (a1 - p * Eigen::MatrixXd::Identity(s, s));
        const Eigen::RowVectorXd last = lu.solve(Eigen::MatrixXd::Identity(s, s)).row(s - 1);
        const Eigen::RowVectorXd k = last * pa;
        const Eigen::MatrixXd g = g0 - mix * k;

        auto got = sorted_eigenvalues(at + bt * g);
        bool ok = true;
        for (std::size_t i = 0; i < got.size(); ++i)
            ok = ok && std::abs(got[i] - sorted[i]) < 1e-6 * (1.0 + std::abs(sorted[i]));
        if (ok)
            return g.transpose();
    }
    throw std::runtime_error("pole placement failed; pair may be unobservable");
}

Certificate certificate_candidate(const RestrictedLinearProblem& prob, Tolerances tol)
{
    const auto basis = max_invariant_subspace(prob.A, prob.F, tol);
    const Eigen::Index s = basis.T2.rows();
    Certificate cert;
    for (Eigen::Index k = 0; k < s; ++k)
        cert.placed_poles.emplace_back(-1.0 - 0.5 * static_cast<double>(k), 0.0);
    Eigen::MatrixXd lower = basis.T2;
    if (s > 0 && basis.T3.rows() > 0) {
        std::vector<double> poles;
        for (auto z : cert.placed_poles)
            poles.push_back(z.real());
        const Eigen::MatrixXd a22 = basis.T2 * prob.A * basis.T2.transpose();
        const Eigen::MatrixXd c = basis.T3 * prob.A * basis.T2.transpose();
        lower += place_observer_poles(a22, c, poles) * basis.T3;
    }
    cert.P.resize(basis.T1.rows() + s, prob.A.cols());
    cert.P << basis.T1, lower;
    const auto check = verify_certificate(prob, cert.P, tol);
    cert.reduced = check.reduced;
    cert.column_order = invertible_trailing_columns(prob.F, tol.rank_rel);
    return cert;
}

CertificateCheck verify_certificate(const RestrictedLinearProblem& prob, const Eigen::MatrixXd& P, Tolerances tol)
{
    const Eigen::Index n = prob.A.rows();
    const Eigen::Index m = prob.F.rows();
    if (P.rows() != n - m || P.cols() != n)
        throw std::invalid_argument("certificate has wrong shape");
    const auto order = invertible_trailing_columns(prob.F, tol.rank_rel);
    Eigen::MatrixXd ap(n, n), fp(m, n), pp(n - m, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        const auto oc = order[static_cast<std::size_t>(c)];
        fp.col(c) = prob.F.col(oc);
        pp.col(c) = P.col(oc);
        for (Eigen::Index r = 0; r < n; ++r)
            ap(r, c) = prob.A(order[static_cast<std::size_t>(r)], oc);
    }
    CertificateCheck out;
    Eigen::MatrixXd full(n, n);
    full << pp, fp;
    out.invertible = numerical_rank(full, tol.rank_rel) == n;
    if (n - m == 0) {
        out.hurwitz = true;
        out.reduced = Eigen::MatrixXd(0, 0);
        return out;
    }
    Eigen::MatrixXd embed(n, n - m);
    embed.topRows(n - m).setIdentity();
    if (m > 0)
        embed.bottomRows(m) = -fp.rightCols(m).fullPivLu().solve(fp.leftCols(n - m));
    const Eigen::MatrixXd pe = pp * embed;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(pe);
    if (!lu.isInvertible())
        return out;
    out.reduced = (pp * ap * embed) * lu.inverse();
    out.hurwitz = hurwitz(sorted_eigenvalues(out.reduced), tol.hurwitz);
    return out;
}

std::optional<Certificate> theorem2_certificate(const RestrictedLinearProblem& prob, Tolerances tol)
{
    if (!restricted_stability_linear(prob, tol).stable)
        return std::nullopt;
    auto cert = certificate_candidate(prob, tol);
    const auto check = verify_certificate(prob, cert.P, tol);
    if (!check.invertible || !check.hurwitz)
        return std::nullopt;
    return cert;
}

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::exponentially_stable:
        return "exponentially_stable";
    case Verdict::not_stable:
        return "not_stable";
    case Verdict::inconclusive:
        return "inconclusive";
    }
    return "unknown";
}

StabilityReport algorithm1(const SchlafliSolid& s, const InterAgentGraph& g, const GainFunction& h,
                           const Algorithm1Options& opt)
{
    const auto t0 = Clock::now();
    const int n = s.n_vertices;
    if (g.size() != n)
        throw std::invalid_argument("graph size does not match the solid");
    StabilityReport rep;
    rep.p = s.p;
    rep.q = s.q;
    rep.required_negative = 2 * n - 3;

    const Eigen::VectorXd xi = equilibrium_xi(s);
    const Eigen::MatrixXd A = xi_s_jacobian(xi, g, h);
    rep.jacobian_seconds = seconds_since(t0);
    const InvariantSubspaceSolver solver(A, opt.tol);

    std::vector<ConstraintSubset> candidates;
    for (int i = 3; i < n; ++i)
        candidates.emplace_back(std::array{0, 1, 2, i});
    const std::size_t primary = candidates.size();
    if (opt.extended_candidates)
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                for (int c = b + 1; c < n; ++c)
                    for (int d = c + 1; d < n; ++d)
                        if (!(a == 0 && b == 1 && c == 2))
                            candidates.emplace_back(std::array{a, b, c, d});

    Eigen::MatrixXd gradients(0, A.cols());
    Eigen::MatrixXd block = A;
    std::size_t next = 0;
    for (;;) {
        rep.restricted_spectrum = sorted_eigenvalues(block);
        const auto negative = static_cast<int>(std::count_if(rep.restricted_spectrum.begin(),
                                                             rep.restricted_spectrum.end(),
                                                             [&](auto z) { return z.real() < -opt.tol.hurwitz; }));
        rep.history.push_back({rep.m_max, block.rows(), negative});
        if (negative == static_cast<int>(rep.restricted_spectrum.size())) {
            rep.verdict = Verdict::exponentially_stable;
            break;
        }
        if (negative < rep.required_negative) {
            rep.verdict = Verdict::not_stable;
            break;
        }
        bool added = false;
        while (next < candidates.size()) {
            const ConstraintSubset c = candidates[next++];
            Eigen::MatrixXd trial(gradients.rows() + 1, A.cols());
            trial << gradients, gram_gradient(xi, c).transpose();
            Eigen::BDCSVD<Eigen::MatrixXd> svd(trial);
            const auto& sv = svd.singularValues();
            if (sv[0] > 1e-12 && sv[sv.size() - 1] > opt.tol.rank_rel * sv[0]) {
                gradients = std::move(trial);
                rep.constraint_sets.push_back(c);
                rep.used_extended_candidates = rep.used_extended_candidates || next > primary;
                added = true;
                break;
            }
        }
        if (!added) {
            rep.verdict = Verdict::inconclusive;
            break;
        }
        ++rep.m_max;
        const auto basis = solver.solve(gradients);
        block = basis.T1 * A * basis.T1.transpose();
    }
    rep.gradient_rank = numerical_rank(gradients, opt.tol.rank_rel);
    rep.total_seconds = seconds_since(t0);
    return rep;
}

bool theorem3_exponential_lift(const StabilityReport& report, Tolerances tol)
{
    return report.verdict == Verdict::exponentially_stable &&
           report.gradient_rank == static_cast<Eigen::Index>(report.constraint_sets.size()) &&
           hurwitz(report.restricted_spectrum, tol.hurwitz);
}

}  // namespace sphform
