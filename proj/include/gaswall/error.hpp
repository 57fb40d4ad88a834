#ifndef GASWALL_ERROR_HPP
#define GASWALL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace gaswall {

/// Argument outside the mathematical domain of an operation.
class domain_error : public std::domain_error
{
public:
    explicit domain_error(std::string const& what) : std::domain_error(what) {}
};

/// A quadrature, expansion or root search failed to meet its tolerance.
class numerical_error : public std::runtime_error
{
public:
    explicit numerical_error(std::string const& what) : std::runtime_error(what) {}
};

} // namespace gaswall

#endif // GASWALL_ERROR_HPP
