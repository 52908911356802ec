// Copyright 2026 The qcd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qcd/distances.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include <Eigen/SVD>

namespace qcd {

namespace {

using Index = Eigen::Index;

constexpr double kHelstromTieTol = 1e-9;
constexpr double kMonotoneSlack = 1e-12;

ComplexVector random_unit_vector(std::size_t dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexVector v(static_cast<Index>(dim));
    for (Index i = 0; i < v.size(); i++) {
        double re = normal(rng);
        double im = normal(rng);
        v(i) = Complex(re, im);
    }
    return v / v.norm();
}

bool relatively_converged(double prev, double cur, double rel_tol) {
    return std::abs(cur - prev) <= rel_tol * std::max(std::abs(cur), 1e-300);
}

// Runs body(j) for j in [0, count) on up to `threads` workers. Each index is
// handled exactly once; output ordering is the caller's business.
template <typename Body>
void parallel_for(std::size_t count, std::size_t threads, Body body) {
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads == 1) {
        for (std::size_t j = 0; j < count; j++) {
            body(j);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; t++) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t j = next.fetch_add(1);
                if (j >= count) {
                    return;
                }
                try {
                    body(j);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mu);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto &th : pool) {
        th.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

void check_same_type(const Channel &a, const Channel &b) {
    if (a.n_in() != b.n_in() || a.n_out() != b.n_out()) {
        throw ShapeError("channels disagree on type: (" + std::to_string(a.n_in()) + "," +
                         std::to_string(a.n_out()) + ") vs (" + std::to_string(b.n_in()) + "," +
                         std::to_string(b.n_out()) + ")");
    }
}

void check_monotone(double prev, double cur, std::size_t dim, const char *step) {
    const double slack = kMonotoneSlack + 2 * kHelstromTieTol * static_cast<double>(dim);
    if (prev - cur > slack) {
        std::ostringstream msg;
        msg << "seesaw objective decreased at " << step << " by " << std::scientific << prev - cur;
        throw InternalConsistencyError(msg.str());
    }
}

// Square root with eigenvalues under the rounding floor of the spectrum set to 0.
ComplexMatrix floored_sqrt(const ComplexMatrix &p) {
    auto s = spectral(p);
    const double top = s.values.cwiseAbs().maxCoeff();
    const double floor = 64 * static_cast<double>(p.rows()) * std::numeric_limits<double>::epsilon() * top;
    RealVector root(s.values.size());
    for (Index i = 0; i < s.values.size(); i++) {
        root[i] = s.values[i] > floor ? std::sqrt(s.values[i]) : 0.0;
    }
    return s.vectors * root.asDiagonal() * s.vectors.adjoint();
}

}  // namespace

double trace_norm(const ComplexMatrix &x) {
    return singular_values(x).sum();
}

double fidelity(const DensityMatrix &rho, const DensityMatrix &xi) {
    if (rho.dim() != xi.dim()) {
        throw ShapeError("fidelity: dimension mismatch");
    }
    // tr sqrt(sqrt(rho) xi sqrt(rho)) = || sqrt(rho) sqrt(xi) ||_tr.
    ComplexMatrix prod = floored_sqrt(rho.mat()) * floored_sqrt(xi.mat());
    return std::clamp(trace_norm(prod), 0.0, 1.0);
}

double fidelity_via_purification(const StateVector &psi, const StateVector &phi, std::size_t system_dim) {
    if (psi.dim() != phi.dim() || system_dim == 0 || psi.dim() % system_dim != 0) {
        throw ShapeError("fidelity_via_purification: dimension mismatch");
    }
    const auto dh = static_cast<Index>(system_dim);
    const auto dk = static_cast<Index>(psi.dim() / system_dim);
    // Row-major reshape: entry (h, k) is amplitude h*dk + k.
    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> a(
        psi.amplitudes().data(), dh, dk);
    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> b(
        phi.amplitudes().data(), dh, dk);
    // (tr_H |psi><phi|)[k, k'] = sum_h psi[h,k] conj(phi[h,k']).
    ComplexMatrix reduced = a.transpose() * b.conjugate();
    return trace_norm(reduced);
}

HelstromResult helstrom(const ComplexMatrix &delta) {
    auto s = spectral(delta);
    HelstromResult out;
    out.projector = ComplexMatrix::Zero(delta.rows(), delta.cols());
    for (Index k = 0; k < s.values.size(); k++) {
        out.value += std::abs(s.values[k]);
        if (s.values[k] > kHelstromTieTol) {
            out.projector.noalias() += s.vectors.col(k) * s.vectors.col(k).adjoint();
        }
    }
    return out;
}

void OptimizerConfig::check() const {
    if (restarts < 1) {
        throw DomainError("optimizer restarts must be at least 1");
    }
    if (!(rel_tol > 0)) {
        throw DomainError("optimizer rel_tol must be positive");
    }
    if (max_iters < 1) {
        throw DomainError("optimizer max_iters must be at least 1");
    }
}

double diamond_objective(const Channel &ch0, const Channel &ch1, const ComplexVector &psi) {
    check_same_type(ch0, ch1);
    const std::size_t din = ch0.dim_in();
    if (psi.size() == 0 || static_cast<std::size_t>(psi.size()) % din != 0) {
        throw ShapeError("diamond_objective: input vector does not match input (x) reference");
    }
    ChoiContraction diff(ch0.choi() - ch1.choi(), din, ch0.dim_out());
    ComplexMatrix delta = diff.forward(psi * psi.adjoint(), static_cast<std::size_t>(psi.size()) / din);
    return trace_norm(delta);
}

DiamondWitness diamond_norm(
    const Channel &ch0, const Channel &ch1, const OptimizerConfig &cfg, std::size_t reference_dim) {
    cfg.check();
    check_same_type(ch0, ch1);
    const std::size_t din = ch0.dim_in();
    const std::size_t dref = reference_dim == 0 ? din : reference_dim;
    const ChoiContraction diff(ch0.choi() - ch1.choi(), din, ch0.dim_out());

    std::vector<DiamondWitness> runs(cfg.restarts);
    parallel_for(cfg.restarts, cfg.threads, [&](std::size_t j) {
        std::mt19937_64 rng(cfg.seed + j);
        DiamondWitness w;
        w.dim_in = din;
        w.dim_ref = dref;
        ComplexVector psi = random_unit_vector(din * dref, rng);
        double prev = -1;
        for (std::size_t iter = 0; iter < cfg.max_iters; iter++) {
            ComplexMatrix delta = diff.forward(psi * psi.adjoint(), dref);
            delta = (delta + delta.adjoint()) * 0.5;
            auto h = helstrom(delta);
            if (!w.history.empty()) {
                check_monotone(w.history.back(), h.value, static_cast<std::size_t>(delta.rows()), "measurement update");
            }
            w.history.push_back(h.value);
            w.value = h.value;
            w.psi = psi;
            w.measurement = std::move(h.projector);
            if (prev >= 0 && relatively_converged(prev, h.value, cfg.rel_tol)) {
                w.converged = true;
                break;
            }
            prev = h.value;

            ComplexMatrix k = diff.adjoint(w.measurement, dref);
            auto ks = spectral((k + k.adjoint()) * 0.5);
            double lifted = 2 * ks.values[0];
            check_monotone(w.history.back(), lifted, static_cast<std::size_t>(k.rows()), "input update");
            w.history.push_back(lifted);
            psi = ks.vectors.col(0);
        }
        runs[j] = std::move(w);
    });

    std::size_t best = 0;
    for (std::size_t j = 1; j < runs.size(); j++) {
        if (runs[j].value > runs[best].value) {
            best = j;
        }
    }
    DiamondWitness out = std::move(runs[best]);
    out.restarts_used = cfg.restarts;
    out.value = std::clamp(out.value, 0.0, 2.0);
    return out;
}

namespace {

// Stinespring isometry: rows (a, e) = a * kraus_count + e, columns input.
ComplexMatrix stinespring(const Channel &ch) {
    const auto &kraus = ch.kraus();
    const auto n = static_cast<Index>(kraus.size());
    const auto dout = static_cast<Index>(ch.dim_out());
    const auto din = static_cast<Index>(ch.dim_in());
    ComplexMatrix v(dout * n, din);
    for (Index e = 0; e < n; e++) {
        for (Index a = 0; a < dout; a++) {
            v.row(a * n + e) = kraus[static_cast<std::size_t>(e)].row(a);
        }
    }
    return v;
}

// Purification of Phi(rho) laid out as rows = output index a,
// columns = (environment e, reference g).
ComplexMatrix image_purification(const ComplexMatrix &v, Index kraus_count, Index dout, const ComplexMatrix &psi) {
    ComplexMatrix phi = v * psi;  // rows (a, e), cols g
    const Index dg = psi.cols();
    ComplexMatrix x(dout, kraus_count * dg);
    for (Index a = 0; a < dout; a++) {
        for (Index e = 0; e < kraus_count; e++) {
            x.block(a, e * dg, 1, dg) = phi.row(a * kraus_count + e);
        }
    }
    return x;
}

struct FidelityStep {
    double value;      // || tr_K |phi_self><phi_other| ||_tr before the update
    ComplexMatrix psi; // improved input purification for `self`
};

// One ascent step for one side: with the other side fixed, align the
// environments with the polar part of the overlap and take the best input.
FidelityStep fidelity_step(const ComplexMatrix &v_self, Index n_self, const ComplexMatrix &x_self,
                           const ComplexMatrix &x_other, Index dout, Index dg) {
    ComplexMatrix g = x_self.adjoint() * x_other;
    Eigen::BDCSVD<ComplexMatrix> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
    FidelityStep step;
    step.value = svd.singularValues().sum();
    ComplexMatrix y = x_other * (svd.matrixV() * svd.matrixU().adjoint());  // dout x (n_self * dg)
    ComplexMatrix yhat(dout * n_self, dg);
    for (Index a = 0; a < dout; a++) {
        for (Index e = 0; e < n_self; e++) {
            yhat.row(a * n_self + e) = y.block(a, e * dg, 1, dg);
        }
    }
    ComplexMatrix chi = v_self.adjoint() * yhat;  // din x dg
    double norm = chi.norm();
    step.psi = norm > 0 ? ComplexMatrix(chi / norm) : ComplexMatrix();
    return step;
}

}  // namespace

ImageFidelityResult max_image_fidelity(const Circuit &q0, const Circuit &q1, const OptimizerConfig &cfg) {
    cfg.check();
    if (q0.n_in != q1.n_in || q0.n_out() != q1.n_out()) {
        throw ShapeError("max_image_fidelity: circuits disagree on type");
    }
    const Channel ch0 = choi_of(q0);
    const Channel ch1 = choi_of(q1);
    const ComplexMatrix v0 = stinespring(ch0);
    const ComplexMatrix v1 = stinespring(ch1);
    const auto n0 = static_cast<Index>(ch0.kraus().size());
    const auto n1 = static_cast<Index>(ch1.kraus().size());
    const auto din = static_cast<Index>(ch0.dim_in());
    const auto dout = static_cast<Index>(ch0.dim_out());
    const Index dg = din;

    struct Run {
        double value = -1;
        ComplexMatrix psi0, psi1;
        bool converged = false;
    };
    std::vector<Run> runs(cfg.restarts);
    parallel_for(cfg.restarts, cfg.threads, [&](std::size_t j) {
        std::mt19937_64 rng(cfg.seed + j);
        auto as_matrix = [&](const ComplexVector &v) {
            ComplexMatrix m(din, dg);
            for (Index i = 0; i < din; i++) {
                for (Index g = 0; g < dg; g++) {
                    m(i, g) = v(i * dg + g);
                }
            }
            return m;
        };
        Run run;
        run.psi0 = as_matrix(random_unit_vector(static_cast<std::size_t>(din * dg), rng));
        run.psi1 = as_matrix(random_unit_vector(static_cast<std::size_t>(din * dg), rng));
        double prev = -1;
        for (std::size_t iter = 0; iter < cfg.max_iters; iter++) {
            ComplexMatrix x0 = image_purification(v0, n0, dout, run.psi0);
            ComplexMatrix x1 = image_purification(v1, n1, dout, run.psi1);
            auto s0 = fidelity_step(v0, n0, x0, x1, dout, dg);
            run.value = s0.value;
            if (prev >= 0 && relatively_converged(prev, s0.value, cfg.rel_tol)) {
                run.converged = true;
                break;
            }
            prev = s0.value;
            if (s0.psi.size() == 0) {
                // Orthogonal images everywhere reachable from here; nothing to climb.
                run.converged = true;
                break;
            }
            run.psi0 = s0.psi;
            x0 = image_purification(v0, n0, dout, run.psi0);
            auto s1 = fidelity_step(v1, n1, x1, x0, dout, dg);
            if (s1.psi.size() != 0) {
                run.psi1 = s1.psi;
            }
        }
        runs[j] = std::move(run);
    });

    std::size_t best = 0;
    for (std::size_t j = 1; j < runs.size(); j++) {
        if (runs[j].value > runs[best].value) {
            best = j;
        }
    }
    const auto &win = runs[best];
    auto to_state = [](const ComplexMatrix &psi) {
        ComplexMatrix rho = psi * psi.adjoint();
        rho /= rho.trace().real();
        return DensityMatrix((rho + rho.adjoint()) * 0.5);
    };
    ImageFidelityResult out;
    out.rho0 = to_state(win.psi0);
    out.rho1 = to_state(win.psi1);
    out.value = fidelity(apply(q0, out.rho0), apply(q1, out.rho1));
    out.restarts_used = cfg.restarts;
    out.converged = win.converged;
    return out;
}

}  // namespace qcd
