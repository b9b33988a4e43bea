#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sdmce
{

/** @brief Base class of every exception thrown by the library */
class Error : public std::runtime_error
{
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/** @brief Malformed mesh or UV file. Carries the 1-based line number (0 if unknown). */
class ParseError : public Error
{
public:
    ParseError(const std::string& msg, std::size_t line);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/** @brief The mesh is not a consistently oriented topological disk */
class TopologyError : public Error
{
public:
    using Error::Error;
};

/** @brief Reading or writing a stream failed */
class IoError : public Error
{
public:
    using Error::Error;
};

/** @brief A source face has zero area so its cotangent weights are undefined */
class DegenerateFaceError : public Error
{
public:
    explicit DegenerateFaceError(int face);
    int face() const noexcept { return face_; }

private:
    int face_;
};

/** @brief Factorization of the interior Laplacian block failed */
class SingularInteriorError : public Error
{
public:
    SingularInteriorError(const std::string& msg, double condition_estimate);
    double condition_estimate() const noexcept { return condition_; }

private:
    double condition_;
};

/** @brief The adaptive penalty exceeded its ceiling without passing the gates */
class EscalationOverflow : public Error
{
public:
    explicit EscalationOverflow(double mu);
    double mu() const noexcept { return mu_; }

private:
    double mu_;
};

/** @brief The 3x3 simultaneous update of a folded interior triangle is singular */
class SingularUpdateError : public Error
{
public:
    SingularUpdateError(int face, double determinant);
    int face() const noexcept { return face_; }

private:
    int face_;
};

}  // namespace sdmce
