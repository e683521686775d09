#pragma once

#include <span>
#include <string>

namespace musepref::modelsel {

enum class F1Average { Binary, Macro, Weighted };

std::string to_string(F1Average avg);
F1Average f1_average_from_string(const std::string& s);

// Binary: F1 of the positive (Favored) class; 0 when precision + recall = 0.
double f1_score(std::span<const int> predictions, std::span<const int> truths,
                F1Average average = F1Average::Binary, int positive = 1);

double accuracy(std::span<const int> predictions, std::span<const int> truths);

}  // namespace musepref::modelsel
