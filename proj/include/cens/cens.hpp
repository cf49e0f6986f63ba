#pragma once

#include "cens/core.hpp"
#include "cens/tensor.hpp"
#include "cens/spectra.hpp"
#include "cens/models.hpp"
#include "cens/haar.hpp"
#include "cens/censemble.hpp"
#include "cens/correlators.hpp"
#include "cens/otoc.hpp"
#include "cens/plateau.hpp"
#include "cens/volume.hpp"
#include "cens/io.hpp"
