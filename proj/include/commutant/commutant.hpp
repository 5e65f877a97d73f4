#pragma once

#include "charpoly.hpp"
#include "conjugacy.hpp"
#include "core.hpp"
#include "expsum.hpp"
#include "ff.hpp"
#include "flatcheck.hpp"
#include "harmonic.hpp"
#include "matfp.hpp"
#include "matz.hpp"
