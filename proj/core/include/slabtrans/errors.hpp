#pragma once

#include <stdexcept>
#include <string>

namespace slabtrans
{

/// Bad caller input (sizes, ranges, nonpositive step sizes).
class InvalidArgument : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Scattering kernel fails symmetry, normalization, positivity or spectral-gap checks.
class InvalidKernel : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Pseudo-inverse requested for data with a nonzero null-space component.
class NotInRange : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

/// Half-space spectrum does not split as (N positive, 1 zero, N negative).
class DegenerateSystem : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Singular half-space constraint matrix or vanishing end-state normalization.
class IllPosedDiscretization : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Time step violates the advection CFL bound.
class InvalidTimestep : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

} // namespace slabtrans
