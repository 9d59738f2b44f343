#pragma once

// perla: persistent Laplacians of weighted simplicial complexes,
// filtrations, and cellular cosheaves — spectra, persistent spectral
// counting functions, interleaving distances, and theorem audits.

#include "perla/audit.hpp"
#include "perla/complex.hpp"
#include "perla/cosheaf.hpp"
#include "perla/counting.hpp"
#include "perla/examples.hpp"
#include "perla/io.hpp"
#include "perla/laplacian.hpp"
#include "perla/linalg.hpp"
#include "perla/random_gen.hpp"
#include "perla/simplex.hpp"
#include "perla/types.hpp"
