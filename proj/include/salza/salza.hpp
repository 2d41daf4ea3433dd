#pragma once

#include "salza/admissible.hpp"
#include "salza/bytes.hpp"
#include "salza/clustering.hpp"
#include "salza/complexity.hpp"
#include "salza/directed_info.hpp"
#include "salza/io.hpp"
#include "salza/lz.hpp"
#include "salza/parallel.hpp"
#include "salza/synth.hpp"
