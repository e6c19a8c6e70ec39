#pragma once

#include <vector>

namespace gatsac {

double mean(const std::vector<double>& xs);
double sample_stddev(const std::vector<double>& xs);  // n-1 denominator, 0 if n<2
double median(std::vector<double> xs);                // by value: sorts a copy

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p_two_sided = 1.0;
};

// Welch's unequal-variance t-test.
WelchResult welch_ttest(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace gatsac
