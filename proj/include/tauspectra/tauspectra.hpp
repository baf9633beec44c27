#ifndef TAUSPECTRA_TAUSPECTRA_HPP
#define TAUSPECTRA_TAUSPECTRA_HPP

#include "tauspectra/asymptotics.hpp"
#include "tauspectra/common.hpp"
#include "tauspectra/diffusion.hpp"
#include "tauspectra/kron.hpp"
#include "tauspectra/markov.hpp"
#include "tauspectra/multi_index.hpp"
#include "tauspectra/secular.hpp"
#include "tauspectra/solve.hpp"
#include "tauspectra/tau_matrix.hpp"
#include "tauspectra/tridiag_eig.hpp"
#include "tauspectra/wealth.hpp"

#endif // TAUSPECTRA_TAUSPECTRA_HPP
