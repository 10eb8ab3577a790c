#include "sprony/numeric.hpp"

#include <ios>
#include <limits>

#include <boost/math/constants/constants.hpp>
#include <Eigen/SVD>

#include "sprony/error.hpp"

namespace sprony
{

Real pi() { return boost::math::constants::pi<Real>(); }

Real infinity() { return std::numeric_limits<Real>::infinity(); }

bool is_finite(const Real& x) { return boost::multiprecision::isfinite(x); }

Real magnitude(const Complex& z)
{
    using boost::multiprecision::hypot;
    return hypot(z.real(), z.imag());
}

std::string format_real(const Real& x)
{
    if (x == 0)
    {
        return "0";
    }
    return x.str(std::numeric_limits<Real>::max_digits10,
                 std::ios_base::scientific);
}

Real parse_real(const std::string& text)
{
    try
    {
        return Real(text);
    }
    catch (const std::exception&)
    {
        throw Error(ErrorKind::ParseError, "not a number: '" + text + "'");
    }
}

RealVector singular_values(const ComplexMatrix& m)
{
    if (m.size() == 0)
    {
        return RealVector();
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues();
}

Real spectral_norm(const ComplexMatrix& m)
{
    const RealVector s = singular_values(m);
    return s.size() == 0 ? Real(0) : s(0);
}

} // namespace sprony
