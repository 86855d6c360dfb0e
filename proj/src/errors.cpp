#include "fqgeom/errors.hpp"

namespace fqgeom {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPrime: return "NonPrime";
    case ErrorKind::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorKind::EvenCharacteristic: return "EvenCharacteristic";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::WrongResidue: return "WrongResidue";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotInDomain: return "NotInDomain";
    case ErrorKind::FormMismatch: return "FormMismatch";
    case ErrorKind::NotOriented: return "NotOriented";
    case ErrorKind::DegenerateSegment: return "DegenerateSegment";
    case ErrorKind::BadParameters: return "BadParameters";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace fqgeom
