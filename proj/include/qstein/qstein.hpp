#pragma once

#include "qstein/tensor.hpp"
#include "qstein/state_io.hpp"
#include "qstein/divergences.hpp"
#include "qstein/sdp.hpp"
#include "qstein/symmetry.hpp"
#include "qstein/hypothesis.hpp"
#include "qstein/wasserstein.hpp"
#include "qstein/almost_iid.hpp"
#include "qstein/resource.hpp"
#include "qstein/stein_lab.hpp"
