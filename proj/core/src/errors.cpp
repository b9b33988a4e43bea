#include "sdmce/errors.hpp"

#include <sstream>

namespace sdmce
{

namespace
{
std::string with_line(const std::string& msg, std::size_t line)
{
    if (line == 0) {
        return msg;
    }
    return "line " + std::to_string(line) + ": " + msg;
}
}  // namespace

ParseError::ParseError(const std::string& msg, std::size_t line)
    : Error(with_line(msg, line)), line_(line)
{
}

DegenerateFaceError::DegenerateFaceError(int face)
    : Error("face " + std::to_string(face) + " has zero area"), face_(face)
{
}

SingularInteriorError::SingularInteriorError(const std::string& msg,
                                             double condition_estimate)
    : Error(msg), condition_(condition_estimate)
{
}

EscalationOverflow::EscalationOverflow(double mu)
    : Error([mu] {
          std::ostringstream ss;
          ss << "penalty weight escalated to " << mu
             << " without satisfying the energy and area gates";
          return ss.str();
      }()),
      mu_(mu)
{
}

SingularUpdateError::SingularUpdateError(int face, double determinant)
    : Error([&] {
          std::ostringstream ss;
          ss << "interior update of face " << face
             << " is singular (det = " << determinant << ")";
          return ss.str();
      }()),
      face_(face)
{
}

}  // namespace sdmce
