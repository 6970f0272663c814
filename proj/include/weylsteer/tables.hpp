#pragma once

#include <array>

namespace weylsteer::tables {

// Reference values for the three CNOT design tables regenerated by the
// `table` subcommand; the diff mode compares per cell at 1e-4.

struct DetuneRow {
  double k;
  double t_pi2;
  int n;
  double omega1;
};

inline constexpr std::array<DetuneRow, 17> kDetune = {{
    {0.100, 10, 6, 0.6633},  {0.100, 10, 7, 0.9798},  {0.100, 10, 8, 1.2490},
    {0.050, 20, 11, 0.4583}, {0.050, 20, 12, 0.6633}, {0.050, 20, 13, 0.8307},
    {0.050, 20, 14, 0.9798}, {0.050, 20, 15, 1.1180}, {0.025, 40, 21, 0.3202},
    {0.025, 40, 22, 0.4583}, {0.025, 40, 23, 0.5679}, {0.025, 40, 24, 0.6633},
    {0.025, 40, 25, 0.7500}, {0.025, 40, 26, 0.8307}, {0.025, 40, 27, 0.9069},
    {0.025, 40, 28, 0.9798}, {0.025, 40, 29, 1.0500},
}};

struct ConstrainedRow {
  double k;
  double t_pi2;
  double omega2;
  double omega_b;  // omega3 for the symmetric family, omega4 for the asymmetric
  double eta;
};

inline constexpr std::array<ConstrainedRow, 17> kSymmetric = {{
    {0.000, 1.595776, 0.000000, 0.755502, 2.5066},
    {0.001, 1.595775, 0.000264, 0.755503, 2.5066},
    {0.002, 1.595774, 0.000529, 0.755505, 2.5066},
    {0.003, 1.595772, 0.000793, 0.755509, 2.5066},
    {0.004, 1.595769, 0.001057, 0.755515, 2.5066},
    {0.005, 1.595765, 0.001322, 0.755522, 2.5066},
    {0.010, 1.595731, 0.002644, 0.755582, 2.5067},
    {0.025, 1.595496, 0.006614, 0.756001, 2.5071},
    {0.050, 1.594657, 0.013257, 0.757500, 2.5084},
    {0.075, 1.593263, 0.019961, 0.760001, 2.5106},
    {0.100, 1.591321, 0.026758, 0.763506, 2.5136},
    {0.150, 1.585843, 0.040779, 0.773549, 2.5223},
    {0.250, 1.569080, 0.071908, 0.806036, 2.5493},
    {0.350, 1.547002, 0.111865, 0.856120, 2.5856},
    {0.450, 1.530753, 0.178169, 0.927506, 2.6131},
    {0.490, 1.550430, 0.240369, 0.966790, 2.5799},
    {0.493, 1.561200, 0.254105, 0.971189, 2.5621},
}};

inline constexpr std::array<ConstrainedRow, 17> kAsymmetric = {{
    {0.000, 1.553771, 0.000000, 0.402539, 2.5744},
    {0.001, 1.553770, 0.000179, 0.402541, 2.5744},
    {0.002, 1.553768, 0.000358, 0.402548, 2.5744},
    {0.003, 1.553766, 0.000537, 0.402558, 2.5744},
    {0.004, 1.553762, 0.000715, 0.402574, 2.5744},
    {0.005, 1.553757, 0.000894, 0.402593, 2.5744},
    {0.010, 1.553716, 0.001789, 0.402757, 2.5745},
    {0.025, 1.553430, 0.004475, 0.403902, 2.5749},
    {0.050, 1.552414, 0.008974, 0.407988, 2.5766},
    {0.075, 1.550736, 0.013523, 0.414781, 2.5794},
    {0.100, 1.548418, 0.018150, 0.424259, 2.5833},
    {0.150, 1.541995, 0.027780, 0.451143, 2.5940},
    {0.250, 1.523410, 0.050016, 0.535559, 2.6256},
    {0.350, 1.501442, 0.081649, 0.659439, 2.6641},
    {0.450, 1.488962, 0.141937, 0.826279, 2.6864},
    {0.500, 1.515587, 0.220268, 0.938373, 2.6392},
    {0.506, 1.539498, 0.251771, 0.959755, 2.5982},
}};

}  // namespace weylsteer::tables
