#pragma once

#include <functional>

namespace statewalk {

// Trial scheduling for Monte Carlo ensembles. Parallel uses OpenMP when
// compiled in; Serial is the reference path the tests compare against.
// Trial bodies must derive all randomness from their trial index, so the two
// policies produce identical results.
enum class ExecPolicy { Serial, Parallel };

void run_trials(int n_trials, ExecPolicy policy, const std::function<void(int)>& body);

// Threads available to the Parallel policy (1 without OpenMP).
int max_threads();

} // namespace statewalk
