#include "fgot/filters.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <utility>

namespace fgot {

namespace {

constexpr double kEigClampTol = 1e-8;

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

FilterSpec parse_atom(std::string_view token) {
    const std::string t = to_lower(token);
    if (t == "pinv-sqrt") return FilterSpec::pinv_sqrt();
    if (t == "sq") return FilterSpec::square();
    if (t == "sqrt") return FilterSpec::sqrt();
    if (t.rfind("heat:", 0) == 0) {
        const std::string arg = t.substr(5);
        std::size_t used = 0;
        double tau = 0.0;
        try {
            tau = std::stod(arg, &used);
        } catch (const std::exception&) {
            throw ValidationError("bad heat filter parameter: '" + arg + "'");
        }
        if (used != arg.size()) {
            throw ValidationError("trailing characters in heat filter parameter: '" + arg + "'");
        }
        return FilterSpec::heat(tau);
    }
    throw ValidationError("unknown filter '" + std::string(token) +
                          "' (expected pinv-sqrt, sq, sqrt, heat:<tau>)");
}

} // namespace

FilterSpec FilterSpec::heat(double tau) {
    if (!(tau > 0.0)) throw ValidationError("heat filter requires tau > 0");
    return {Kind::Heat, tau, {}, 1e-8};
}

FilterSpec FilterSpec::sum(std::vector<FilterSpec> terms) {
    if (terms.size() < 2) throw ValidationError("sum filter requires >= 2 members");
    return {Kind::Sum, 0.0, std::move(terms), 1e-8};
}

FilterSpec FilterSpec::parse(std::string_view text) {
    std::vector<FilterSpec> parts;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t plus = text.find('+', start);
        if (plus == std::string_view::npos) plus = text.size();
        std::string_view token = text.substr(start, plus - start);
        if (token.empty()) throw ValidationError("empty filter term in '" + std::string(text) + "'");
        parts.push_back(parse_atom(token));
        if (plus == text.size()) break;
        start = plus + 1;
    }
    if (parts.empty()) throw ValidationError("empty filter string");
    if (parts.size() == 1) return parts.front();
    return FilterSpec::sum(std::move(parts));
}

std::string FilterSpec::str() const {
    switch (kind) {
        case Kind::PinvSqrt: return "pinv-sqrt";
        case Kind::Square: return "sq";
        case Kind::Sqrt: return "sqrt";
        case Kind::Heat: {
            std::ostringstream os;
            os << "heat:" << tau;
            return os.str();
        }
        case Kind::Sum: {
            std::string out;
            for (std::size_t i = 0; i < terms.size(); ++i) {
                if (i > 0) out += '+';
                out += terms[i].str();
            }
            return out;
        }
    }
    return "?";
}

double evaluate_filter(const FilterSpec& spec, double lambda, double lambda_max) {
    lambda = std::max(lambda, 0.0);
    switch (spec.kind) {
        case FilterSpec::Kind::PinvSqrt: {
            const double zero_tol = spec.zero_tol_rel * std::max(lambda_max, 1.0);
            return lambda > zero_tol ? 1.0 / std::sqrt(lambda) : 0.0;
        }
        case FilterSpec::Kind::Square:
            return lambda * lambda;
        case FilterSpec::Kind::Sqrt:
            return std::sqrt(lambda);
        case FilterSpec::Kind::Heat:
            return std::exp(-spec.tau * lambda);
        case FilterSpec::Kind::Sum: {
            double acc = 0.0;
            for (const FilterSpec& term : spec.terms) {
                acc += evaluate_filter(term, lambda, lambda_max);
            }
            return acc;
        }
    }
    return 0.0;
}

SpectralDecomposition decompose(const Laplacian& l) {
    Eigen::SelfAdjointEigenSolver<Mat> solver(l.matrix);
    if (solver.info() != Eigen::Success) {
        std::ostringstream os;
        os << "eigendecomposition failed for " << l.size() << "x" << l.size()
           << " Laplacian (|L|_max = " << l.matrix.cwiseAbs().maxCoeff()
           << ", trace = " << l.matrix.trace() << ")";
        throw NumericError(os.str());
    }
    Vec lambda = solver.eigenvalues();
    for (Index i = 0; i < lambda.size(); ++i) {
        if (lambda(i) < 0.0 && lambda(i) > -kEigClampTol) lambda(i) = 0.0;
    }
    return SpectralDecomposition{std::move(lambda), solver.eigenvectors()};
}

FilteredGraph materialize(const Graph& g, const FilterSpec& spec) {
    SpectralDecomposition dec = decompose(laplacian(g));
    const double lambda_max = dec.eigenvalues.size() > 0 ? dec.eigenvalues.maxCoeff() : 0.0;
    // Eigenvalues below the relative noise floor are structural zeros of the
    // PSD Laplacian; snapping them keeps responses with unbounded slope at 0
    // (sqrt, pinv-sqrt) consistent across equivalent decompositions.
    const double snap = 1e-8 * std::max(lambda_max, 1.0);
    Vec filtered(dec.eigenvalues.size());
    for (Index i = 0; i < filtered.size(); ++i) {
        const double lambda = dec.eigenvalues(i) <= snap ? 0.0 : dec.eigenvalues(i);
        filtered(i) = evaluate_filter(spec, lambda, lambda_max);
    }
    Mat gl = dec.eigenvectors * filtered.asDiagonal() * dec.eigenvectors.transpose();
    gl = ((gl + gl.transpose()) / 2.0).eval();
    const double trace = filtered.squaredNorm();
    return FilteredGraph{g, spec, std::move(dec), std::move(filtered), std::move(gl), trace};
}

} // namespace fgot
