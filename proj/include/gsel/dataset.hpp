#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gsel::engine {

// Column-major covariate storage; columns are the unit of access everywhere.
struct Matrix {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<double> values;  // size n*k

    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : n(rows), k(cols), values(rows * cols, 0.0) {}

    double* col(std::size_t j) { return values.data() + j * n; }
    const double* col(std::size_t j) const { return values.data() + j * n; }
    double& at(std::size_t i, std::size_t j) { return values[j * n + i]; }
    double at(std::size_t i, std::size_t j) const { return values[j * n + i]; }
};

struct Dataset {
    std::vector<double> y;
    Matrix x;
    std::vector<std::string> labels;  // empty, or one name per column

    std::size_t n() const { return x.n; }
    std::size_t k() const { return x.k; }
};

inline void validate(const Matrix& m) {
    if (m.values.size() != m.n * m.k)
        throw std::invalid_argument("Matrix: storage size does not match n*k");
    for (double v : m.values)
        if (!std::isfinite(v)) throw std::invalid_argument("Matrix: non-finite entry");
}

// n >= 3 and k >= 1 are the minimal shapes any P-value formula accepts.
inline void validate(const Dataset& d) {
    if (d.x.n < 3) throw std::invalid_argument("Dataset: need at least 3 rows");
    if (d.x.k < 1) throw std::invalid_argument("Dataset: need at least 1 covariate");
    if (d.y.size() != d.x.n)
        throw std::invalid_argument("Dataset: response length does not match row count");
    if (!d.labels.empty() && d.labels.size() != d.x.k)
        throw std::invalid_argument("Dataset: label count does not match column count");
    validate(d.x);
    for (double v : d.y)
        if (!std::isfinite(v)) throw std::invalid_argument("Dataset: non-finite response entry");
}

}  // namespace gsel::engine
