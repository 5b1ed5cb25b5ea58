#include "coarsex/faults.hpp"

namespace coarsex::faults {

Injection& active() {
  thread_local Injection injection;
  return injection;
}

}  // namespace coarsex::faults
