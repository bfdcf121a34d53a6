#include "evoprune/error.hpp"

namespace evoprune {

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Config:
      return 2;
    case ErrorKind::Data:
      return 3;
    case ErrorKind::Optimization:
      return 4;
  }
  return 1;
}

}  // namespace evoprune
