// Negative controls: disabling a safeguard must make its criterion worse.
#include <cstdio>
#include <string>

#include "haven/harness/acceptance.hpp"

using namespace haven::harness;

int main(int argc, char** argv) {
  const std::string which = argc > 1 ? argv[1] : "";
  if (which == "theta2") {
    AcceptanceOptions on;
    on.filter = "detection-quality";
    AcceptanceOptions off = on;
    off.theta2 = 0.0;
    const double fp_on = run_acceptance(on).at(0).value("fp");
    const double fp_off = run_acceptance(off).at(0).value("fp");
    std::printf("fp with confidence gate %.0f, without %.0f\n", fp_on, fp_off);
    return fp_off > fp_on ? 0 : 1;
  }
  std::fprintf(stderr, "usage: haven_negative_controls theta2\n");
  return 2;
}
