// Loads a network config, shows a target for 1 s with both modulators
// driven, then holds it through a 2 s delay and prints the readout.
//
//   delay_memory [config.json]

#include <organics/config.hpp>
#include <organics/dynamics.hpp>
#include <organics/spectral.hpp>

#include <cmath>
#include <iostream>

using namespace organics;

int main(int argc, char** argv) {
  const std::string path = argc > 1 ? argv[1] : ORGANICS_SAMPLE_CONFIG;
  NetworkSpec spec = config::load_spec(path);

  const SpectralReport rep = analyze(spec.w_yy, spec.tau_y);
  std::cout << "D = " << rep.dimensionality << ", " << to_string(rep.stability) << "\n";

  // Drive a and b through their offsets: on while the target is shown.
  const CVec target = CVec::Constant(spec.n_inputs(), 1.0 / std::sqrt(double(spec.n_inputs())));
  auto input = [&](double t) { return t < 1000.0 ? target : CVec(CVec::Zero(spec.n_inputs())); };

  NetworkSpec cue = spec;
  cue.c_a.setConstant(1.0);
  cue.c_b.setConstant(1.0);
  const Trajectory shown = simulate(cue, input, 0.0, 1000.0, 1.0, SimState::zeros(spec.n_neurons()));
  SimState held = SimState::zeros(spec.n_neurons(), 1000.0);
  held.y = shown.y.back();
  const Trajectory delay = simulate(spec, input, 1000.0, 3000.0, 1.0, held);

  for (double t : {1000.0, 2000.0, 3000.0}) {
    const CVec r = delay.readout[delay.index_at(t)];
    std::cout << "t = " << t << " ms  readout =";
    for (Eigen::Index i = 0; i < r.size(); ++i) std::cout << " " << r[i].real();
    std::cout << "\n";
  }
  return 0;
}
