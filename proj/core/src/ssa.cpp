#include <ssaid/ssa.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace ssaid::ssa {

namespace {

constexpr std::size_t kDefaultWindowCap = 120;

// Diagonal averaging of the rank-one matrix u v^T (W x K) into a length
// W + K - 1 series.
void hankelize_rank_one(const Eigen::VectorXd& u, const Eigen::VectorXd& v, std::vector<double>& out) {
    const auto w = static_cast<std::size_t>(u.size());
    const auto k = static_cast<std::size_t>(v.size());
    const std::size_t n = w + k - 1;
    out.assign(n, 0.0);
    for (std::size_t i = 0; i < w; ++i) {
        const double ui = u[static_cast<Eigen::Index>(i)];
        double* row = out.data() + i;
        for (std::size_t j = 0; j < k; ++j) {
            row[j] += ui * v[static_cast<Eigen::Index>(j)];
        }
    }
    const std::size_t lo = std::min(w, k);
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t count = std::min({t + 1, lo, n - t});
        out[t] /= static_cast<double>(count);
    }
}

} // namespace

ResolvedSsa resolve(const SsaConfig& config, std::size_t length) {
    if (length < 4) {
        throw Error(ErrorKind::dimension, "SSA needs at least 4 samples");
    }
    const std::size_t window =
        config.window == 0 ? std::min(length / 2, kDefaultWindowCap) : config.window;
    if (window < 2 || window > length - 1) {
        throw Error(ErrorKind::dimension, "SSA window " + std::to_string(window) +
                                              " is invalid for series length " +
                                              std::to_string(length));
    }
    if (config.num_components < 1) {
        throw Error(ErrorKind::dimension, "SSA needs at least one component");
    }
    const std::size_t rank_cap = std::min(window, length - window + 1);
    return {window, std::min(config.num_components, rank_cap)};
}

Decomposition decompose(const TimeSeries& series, const SsaConfig& config) {
    const auto x = series.values();
    const std::size_t n = x.size();
    const auto [w, m] = resolve(config, n);
    const std::size_t k = n - w + 1;

    Eigen::MatrixXd traj(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < w; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            traj(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = x[i + j];
        }
    }

    // Eigenpairs of the lag-covariance matrix give the left singular vectors
    // and squared singular values of the trajectory matrix.
    const Eigen::MatrixXd lag = traj * traj.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lag);
    if (eig.info() != Eigen::Success) {
        throw Error(ErrorKind::input, "SSA eigendecomposition failed");
    }
    const Eigen::VectorXd& values = eig.eigenvalues();
    const Eigen::MatrixXd& vectors = eig.eigenvectors();

    Decomposition dec;
    dec.original_length = n;
    dec.window = w;
    dec.components.reserve(m);
    dec.singular_values.reserve(m);

    std::vector<double> residual(x.begin(), x.end());
    std::vector<double> component;
    for (std::size_t j = 0; j < m; ++j) {
        // Eigen sorts ascending; walk from the top.
        const auto col = static_cast<Eigen::Index>(w - 1 - j);
        dec.singular_values.push_back(std::sqrt(std::max(values[col], 0.0)));
        if (j + 1 == m) {
            dec.components.push_back(residual);
            break;
        }
        const Eigen::VectorXd u = vectors.col(col);
        const Eigen::VectorXd v = traj.transpose() * u;
        hankelize_rank_one(u, v, component);
        for (std::size_t t = 0; t < n; ++t) {
            residual[t] -= component[t];
        }
        dec.components.push_back(component);
    }
    return dec;
}

TimeSeries reconstruct_cumulative(const Decomposition& dec, std::size_t k, const TimeSeries& like) {
    if (k < 1 || k > dec.size()) {
        throw Error(ErrorKind::index, "cumulative reconstruction index " + std::to_string(k) +
                                          " outside [1, " + std::to_string(dec.size()) + "]");
    }
    if (like.size() != dec.original_length) {
        throw Error(ErrorKind::dimension, "reconstruction grid length mismatch");
    }
    std::vector<double> y(dec.original_length, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t t = 0; t < y.size(); ++t) {
            y[t] += dec.components[j][t];
        }
    }
    return like.with_values(std::move(y));
}

std::vector<std::vector<double>> cumulative_reconstructions(const Decomposition& dec) {
    std::vector<std::vector<double>> out;
    out.reserve(dec.size());
    std::vector<double> y(dec.original_length, 0.0);
    for (const auto& c : dec.components) {
        for (std::size_t t = 0; t < y.size(); ++t) {
            y[t] += c[t];
        }
        out.push_back(y);
    }
    return out;
}

} // namespace ssaid::ssa
