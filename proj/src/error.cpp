#include "randshift/error.hpp"

namespace randshift {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput:
      return "InvalidInput";
    case ErrorKind::DiscontinuousShift:
      return "DiscontinuousShift";
    case ErrorKind::HorizonTooLarge:
      return "HorizonTooLarge";
    case ErrorKind::UnsupportedArity:
      return "UnsupportedArity";
    case ErrorKind::NotApplicable:
      return "NotApplicable";
    case ErrorKind::ConstructionFailed:
      return "ConstructionFailed";
    case ErrorKind::ConfigError:
      return "ConfigError";
    case ErrorKind::IoError:
      return "IoError";
  }
  return "Error";
}

}  // namespace randshift
