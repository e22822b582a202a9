// SPDX-License-Identifier: Apache-2.0
//
// gsmimo: link-level simulation of uplink multiuser GSM-MIMO
// Copyright (C) 2026 The gsmimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "gsmimo/detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gsmimo {

DetectorParams default_mpgsm_params() { return DetectorParams{0.3, 8, 1e-3}; }
DetectorParams default_chemp_params() { return DetectorParams{0.3, 10, 1e-3}; }

namespace {

void check_dims(const CVector& y, const CMatrix& H, const GsmCodebook& codebook, int K)
{
    if (K < 1) throw std::invalid_argument("detector: K must be positive");
    if (H.rows() != y.size()) throw std::invalid_argument("detector: H rows do not match y");
    if (H.cols() != static_cast<Eigen::Index>(K) * codebook.n_t())
        throw std::invalid_argument("detector: H columns do not match K n_t");
}

void check_params(const DetectorParams& p)
{
    if (p.max_iters < 1) throw std::invalid_argument("detector: max_iters must be positive");
    if (!(p.damping >= 0.0 && p.damping <= 1.0)) throw std::invalid_argument("detector: damping outside [0, 1]");
    if (p.epsilon < 0.0) throw std::invalid_argument("detector: epsilon must be non-negative");
}

// Codebook as an n_t x |S| matrix.
CMatrix codebook_matrix(const GsmCodebook& codebook)
{
    CMatrix C(codebook.n_t(), codebook.size());
    for (int c = 0; c < codebook.size(); ++c) C.col(c) = codebook.vector(c);
    return C;
}

// In-place softmax of log-weights; ties and rounding never leave a zero sum
// because the maximum maps to exp(0) = 1.
void softmax(Eigen::Ref<Eigen::VectorXd> v)
{
    const double peak = v.maxCoeff();
    v = (v.array() - peak).exp();
    v /= v.sum();
}

void notify(const ProbabilityObserver& observer, int iteration, std::string_view kind, const Eigen::Ref<const Eigen::VectorXd>& p)
{
    if (observer) observer(iteration, kind, std::span<const double>(p.data(), static_cast<std::size_t>(p.size())));
}

} // namespace

int argmax_decision(const Eigen::VectorXd& p)
{
    Eigen::Index best = 0;
    for (Eigen::Index s = 1; s < p.size(); ++s)
        if (p[s] > p[best]) best = s;
    return static_cast<int>(best);
}

Decisions ml_detect(const CVector& y, const CMatrix& H, const GsmCodebook& codebook, int K)
{
    check_dims(y, H, codebook, K);
    const int S = codebook.size();
    const double space = std::pow(static_cast<double>(S), K);
    if (space > 65536.0) throw ConfigError("ml_detect: more than 2^16 hypotheses");

    const CMatrix C = codebook_matrix(codebook);
    std::vector<CMatrix> hs(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) hs[static_cast<std::size_t>(k)] = H.middleCols(k * codebook.n_t(), codebook.n_t()) * C;

    // partial[k] = y - sum_{j<k} H_j x_j, so only the trailing users are
    // recomputed when the odometer advances
    std::vector<CVector> partial(static_cast<std::size_t>(K + 1), y);
    std::vector<int> digits(static_cast<std::size_t>(K), 0);
    for (int k = 0; k < K; ++k) partial[static_cast<std::size_t>(k + 1)] = partial[static_cast<std::size_t>(k)] - hs[static_cast<std::size_t>(k)].col(0);

    Decisions best(digits.begin(), digits.end());
    double best_metric = std::numeric_limits<double>::infinity();
    for (;;) {
        const double metric = partial[static_cast<std::size_t>(K)].squaredNorm();
        if (metric < best_metric) {
            best_metric = metric;
            best.assign(digits.begin(), digits.end());
        }
        int pos = K - 1;
        while (pos >= 0 && ++digits[static_cast<std::size_t>(pos)] == S) digits[static_cast<std::size_t>(pos--)] = 0;
        if (pos < 0) break;
        for (int k = pos; k < K; ++k)
            partial[static_cast<std::size_t>(k + 1)] =
                partial[static_cast<std::size_t>(k)] - hs[static_cast<std::size_t>(k)].col(digits[static_cast<std::size_t>(k)]);
    }
    return best;
}

CVector mmse_estimate(const CVector& y, const CMatrix& H, double sigma2, double symbol_energy)
{
    if (H.rows() != y.size()) throw std::invalid_argument("mmse_estimate: H rows do not match y");
    if (!(symbol_energy > 0.0)) throw std::invalid_argument("mmse_estimate: symbol energy must be positive");
    CMatrix G = H.adjoint() * H;
    G.diagonal().array() += sigma2 / symbol_energy;
    Eigen::LLT<CMatrix> llt(G);
    if (llt.info() != Eigen::Success) throw std::domain_error("mmse_estimate: regularized Gram matrix is singular");
    const CVector x = llt.solve(H.adjoint() * y);
    if (!x.allFinite()) throw std::domain_error("mmse_estimate: regularized Gram matrix is singular");
    return x;
}

int nearest_codeword(const CVector& x, const GsmCodebook& codebook)
{
    if (x.size() != codebook.n_t()) throw std::invalid_argument("nearest_codeword: length mismatch");
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int c = 0; c < codebook.size(); ++c) {
        const double d = (x - codebook.vector(c)).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

Decisions mmse_detect(const CVector& y, const CMatrix& H, double sigma2, const GsmCodebook& codebook, int K)
{
    check_dims(y, H, codebook, K);
    const CVector x = mmse_estimate(y, H, sigma2, codebook.alphabet().avg_energy);
    Decisions d(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) d[static_cast<std::size_t>(k)] = nearest_codeword(x.segment(k * codebook.n_t(), codebook.n_t()), codebook);
    return d;
}

SoftDetection mpgsm_detect(const CVector& y, const CMatrix& H, double sigma2, const GsmCodebook& codebook, int K,
                           const DetectorParams& params, const ProbabilityObserver& observer)
{
    check_dims(y, H, codebook, K);
    check_params(params);
    if (!(sigma2 > 0.0)) throw std::invalid_argument("mpgsm_detect: sigma2 must be positive");

    const int N = static_cast<int>(y.size());
    const int S = codebook.size();
    const double delta = params.damping;

    // hs[k](s, i) = h_{i,[k]} s and its squared magnitude, one column per
    // observation so the inner loops run over contiguous codewords
    const CMatrix C = codebook_matrix(codebook);
    std::vector<CMatrix> hs(static_cast<std::size_t>(K));
    std::vector<Eigen::MatrixXd> hs2(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        hs[static_cast<std::size_t>(k)] = (H.middleCols(k * codebook.n_t(), codebook.n_t()) * C).transpose();
        hs2[static_cast<std::size_t>(k)] = hs[static_cast<std::size_t>(k)].cwiseAbs2();
    }

    // edge[k].col(i) = p_ki
    std::vector<Eigen::MatrixXd> edge(static_cast<std::size_t>(K), Eigen::MatrixXd::Constant(S, N, 1.0 / S));
    std::vector<Eigen::VectorXd> posterior(static_cast<std::size_t>(K), Eigen::VectorXd::Constant(S, 1.0 / S));

    Eigen::MatrixXcd mu_t(N, K);
    Eigen::MatrixXd var_t(N, K);
    Eigen::VectorXcd mu(N);
    Eigen::VectorXd var(N);
    Eigen::MatrixXd t(S, N);
    Eigen::VectorXd L(S);
    Eigen::VectorXd msg(S);

    int iter = 0;
    for (iter = 1; iter <= params.max_iters; ++iter) {
        mu.setZero();
        var.setConstant(sigma2);
        for (int j = 0; j < K; ++j) {
            const auto& pj = edge[static_cast<std::size_t>(j)];
            const auto& hj = hs[static_cast<std::size_t>(j)];
            const auto& hj2 = hs2[static_cast<std::size_t>(j)];
            for (int i = 0; i < N; ++i) {
                const cplx m = hj.col(i).transpose() * pj.col(i).cast<cplx>();
                const double e2 = hj2.col(i).dot(pj.col(i));
                const double v = std::max(0.0, e2 - std::norm(m));
                mu_t(i, j) = m;
                var_t(i, j) = v;
                mu[i] += m;
                var[i] += v;
            }
        }

        double change2 = 0.0;
        for (int k = 0; k < K; ++k) {
            const auto& hk = hs[static_cast<std::size_t>(k)];
            for (int i = 0; i < N; ++i) {
                const cplx r = y[i] - (mu[i] - mu_t(i, k));
                const double inv2v = 0.5 / (var[i] - var_t(i, k));
                t.col(i) = (hk.col(i).array() - r).abs2() * inv2v;
            }
            L = -t.rowwise().sum();

            auto& pk = edge[static_cast<std::size_t>(k)];
            for (int i = 0; i < N; ++i) {
                msg = L + t.col(i);
                const double peak = msg.maxCoeff();
                msg = (msg.array() - peak).exp();
                pk.col(i) = ((1.0 - delta) / msg.sum()) * msg + delta * pk.col(i);
                notify(observer, iter, "edge", pk.col(i));
            }

            Eigen::VectorXd post = L;
            softmax(post);
            change2 += (post - posterior[static_cast<std::size_t>(k)]).squaredNorm();
            posterior[static_cast<std::size_t>(k)] = std::move(post);
            notify(observer, iter, "posterior", posterior[static_cast<std::size_t>(k)]);
        }
        if (params.epsilon > 0.0 && std::sqrt(change2) < params.epsilon) break;
    }

    SoftDetection out;
    out.soft.iterations_used = std::min(iter, params.max_iters);
    out.soft.p = std::move(posterior);
    out.decisions.reserve(static_cast<std::size_t>(K));
    for (const auto& p : out.soft.p) out.decisions.push_back(argmax_decision(p));
    return out;
}

GramModel gram_model(const CVector& y, const CMatrix& H, double sigma2)
{
    if (H.rows() != y.size()) throw std::invalid_argument("gram_model: H rows do not match y");
    const double N = static_cast<double>(y.size());
    GramModel g;
    g.z = H.adjoint() * y / N;
    g.J = H.adjoint() * H / N;
    g.sigma_v2 = sigma2 / N;
    return g;
}

namespace {

// Cholesky factor of an interference covariance, lifting near-singular
// matrices by a trace-relative diagonal load.
Eigen::LLT<CMatrix> factor_covariance(CMatrix sigma)
{
    const Eigen::Index n = sigma.rows();
    sigma = 0.5 * (sigma + sigma.adjoint()).eval();
    const Eigen::SelfAdjointEigenSolver<CMatrix> eig(sigma, Eigen::EigenvaluesOnly);
    const double lmax = eig.eigenvalues().maxCoeff();
    const double lmin = eig.eigenvalues().minCoeff();
    if (lmin < 1e-12 * lmax || lmax <= 0.0) {
        const double trace = sigma.diagonal().real().sum();
        double load = 1e-12 * trace / static_cast<double>(n);
        if (lmin < 0.0) load += -lmin;
        if (!(load > 0.0)) load = 1e-12;
        sigma.diagonal().array() += load;
    }
    Eigen::LLT<CMatrix> llt(sigma);
    if (llt.info() != Eigen::Success) throw std::domain_error("chemp_detect: interference covariance not positive definite");
    return llt;
}

} // namespace

SoftDetection chemp_detect(const GramModel& model, const GsmCodebook& codebook, int K, const DetectorParams& params,
                           const ProbabilityObserver& observer)
{
    check_params(params);
    const int nt = codebook.n_t();
    const int S = codebook.size();
    const Eigen::Index dim = static_cast<Eigen::Index>(K) * nt;
    if (K < 1 || model.J.rows() != dim || model.J.cols() != dim || model.z.size() != dim)
        throw std::invalid_argument("chemp_detect: model dimensions do not match K n_t");
    const double delta = params.damping;

    const CMatrix C = codebook_matrix(codebook);
    std::vector<CMatrix> js(static_cast<std::size_t>(K));   // J_kk applied to every codeword
    for (int k = 0; k < K; ++k) js[static_cast<std::size_t>(k)] = model.J.block(k * nt, k * nt, nt, nt) * C;

    std::vector<Eigen::VectorXd> p(static_cast<std::size_t>(K), Eigen::VectorXd::Constant(S, 1.0 / S));
    std::vector<CVector> mean(static_cast<std::size_t>(K));
    std::vector<CMatrix> cov(static_cast<std::size_t>(K));
    std::vector<Eigen::VectorXd> next(static_cast<std::size_t>(K));

    int iter = 0;
    for (iter = 1; iter <= params.max_iters; ++iter) {
        for (int j = 0; j < K; ++j) {
            const auto& pj = p[static_cast<std::size_t>(j)];
            CVector m = C * pj.cast<cplx>();
            cov[static_cast<std::size_t>(j)] = C * pj.cast<cplx>().asDiagonal() * C.adjoint() - m * m.adjoint();
            mean[static_cast<std::size_t>(j)] = std::move(m);
        }

        double change2 = 0.0;
        for (int k = 0; k < K; ++k) {
            CVector mu = CVector::Zero(nt);
            CMatrix sigma = CMatrix::Identity(nt, nt) * model.sigma_v2;
            for (int j = 0; j < K; ++j) {
                if (j == k) continue;
                const auto Jkj = model.J.block(k * nt, j * nt, nt, nt);
                mu += Jkj * mean[static_cast<std::size_t>(j)];
                sigma += Jkj * cov[static_cast<std::size_t>(j)] * Jkj.adjoint();
            }
            const auto llt = factor_covariance(std::move(sigma));
            const CVector base = model.z.segment(k * nt, nt) - mu;
            CMatrix R = (-js[static_cast<std::size_t>(k)]).colwise() + base;
            llt.matrixL().solveInPlace(R);
            Eigen::VectorXd logp = -0.5 * R.colwise().squaredNorm().transpose();
            softmax(logp);
            Eigen::VectorXd damped = (1.0 - delta) * logp + delta * p[static_cast<std::size_t>(k)];
            change2 += (damped - p[static_cast<std::size_t>(k)]).squaredNorm();
            next[static_cast<std::size_t>(k)] = std::move(damped);
        }
        for (int k = 0; k < K; ++k) {
            p[static_cast<std::size_t>(k)] = next[static_cast<std::size_t>(k)];
            notify(observer, iter, "message", p[static_cast<std::size_t>(k)]);
        }
        if (params.epsilon > 0.0 && std::sqrt(change2) < params.epsilon) break;
    }

    SoftDetection out;
    out.soft.iterations_used = std::min(iter, params.max_iters);
    out.soft.p = std::move(p);
    out.decisions.reserve(static_cast<std::size_t>(K));
    for (const auto& pk : out.soft.p) out.decisions.push_back(marginal_decision(pk, codebook));
    return out;
}

int marginal_decision(const Eigen::VectorXd& p, const GsmCodebook& codebook)
{
    if (p.size() != codebook.size()) throw std::invalid_argument("marginal_decision: length mismatch");
    const int n_pat = codebook.pattern_set().size();
    const int M = codebook.alphabet().size();
    const int n_rf = codebook.n_rf();

    std::vector<double> pattern_mass(static_cast<std::size_t>(n_pat), 0.0);
    std::vector<std::vector<double>> symbol_mass(static_cast<std::size_t>(n_rf), std::vector<double>(static_cast<std::size_t>(M), 0.0));
    for (int c = 0; c < codebook.size(); ++c) {
        pattern_mass[static_cast<std::size_t>(codebook.pattern_of(c))] += p[c];
        for (int l = 0; l < n_rf; ++l) symbol_mass[static_cast<std::size_t>(l)][static_cast<std::size_t>(codebook.symbol_of(c, l))] += p[c];
    }
    const auto first_max = [](const std::vector<double>& v) {
        return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
    };
    std::vector<int> symbols(static_cast<std::size_t>(n_rf));
    for (int l = 0; l < n_rf; ++l) symbols[static_cast<std::size_t>(l)] = first_max(symbol_mass[static_cast<std::size_t>(l)]);
    return codebook.compose(first_max(pattern_mass), symbols);
}

std::vector<BitVector> hard_bits(const Decisions& decisions, const GsmCodebook& codebook)
{
    std::vector<BitVector> out;
    out.reserve(decisions.size());
    for (int c : decisions) {
        if (c < 0 || c >= codebook.size()) throw std::invalid_argument("hard_bits: decision outside the codebook");
        out.push_back(codebook.bit_label(c));
    }
    return out;
}

} // namespace gsmimo
