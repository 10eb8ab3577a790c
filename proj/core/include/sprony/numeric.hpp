#ifndef SPRONY_NUMERIC_HPP
#define SPRONY_NUMERIC_HPP

//
// Scalar and matrix types shared by the whole library.
//
// Every computation runs in IEEE binary128 (boost::multiprecision::float128).
// Exponential-sum inversion from 2L samples is exponentially ill-conditioned
// in L; with double precision the node perturbation kappa_exp * 1e-16 already
// exceeds 1e-8 for four closely spaced nodes.
//

#include <complex>
#include <string>
#include <vector>

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>

#include <Eigen/Core>

namespace sprony
{

using Real    = boost::multiprecision::float128;
using Complex = std::complex<Real>;

using RealVector    = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using ComplexVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
using RealMatrix    = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

inline Real max(const Real& a, const Real& b) { return a < b ? b : a; }
inline Real min(const Real& a, const Real& b) { return b < a ? b : a; }

Real pi();
Real infinity();
bool is_finite(const Real& x);

inline double to_double(const Real& x) { return x.convert_to<double>(); }

/// Magnitude of a complex number (std::abs without going through double).
Real magnitude(const Complex& z);

/// Shortest round-trip decimal form (36 significant digits).
std::string format_real(const Real& x);

/// Parses a decimal literal at full precision; throws sprony::Error on junk.
Real parse_real(const std::string& text);

/// Largest singular value.
Real spectral_norm(const ComplexMatrix& m);

/// Singular values in decreasing order.
RealVector singular_values(const ComplexMatrix& m);

} // namespace sprony

#endif // SPRONY_NUMERIC_HPP
