#pragma once

#include <stdexcept>
#include <string>

namespace pimwnn {

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error
{
public:
  using Error::Error;
};

class InvalidLadder : public Error
{
public:
  using Error::Error;
};

class UnsupportedOrder : public Error
{
public:
  using Error::Error;
};

/// Rejection sampling could not find a point inside the geometry.
class GeometryDegenerate : public Error
{
public:
  using Error::Error;
};

/// Non-finite entries reached the least-squares solver.
class InvalidInput : public Error
{
public:
  using Error::Error;
};

class RegistryError : public Error
{
public:
  using Error::Error;
};

class ParameterError : public Error
{
public:
  using Error::Error;
};

class Unsupported : public Error
{
public:
  using Error::Error;
};

class DegenerateReference : public Error
{
public:
  using Error::Error;
};

class Divergence : public Error
{
public:
  Divergence(const std::string& what, int picard_index)
    : Error(what), picard_index_(picard_index)
  {}

  int picard_index() const noexcept { return picard_index_; }

private:
  int picard_index_;
};

} // namespace pimwnn
