#pragma once

#include "mobnil/characters.hpp"
#include "mobnil/checks.hpp"
#include "mobnil/circle.hpp"
#include "mobnil/config.hpp"
#include "mobnil/correlate.hpp"
#include "mobnil/decompose.hpp"
#include "mobnil/error.hpp"
#include "mobnil/fourier.hpp"
#include "mobnil/mobius_cache.hpp"
#include "mobnil/nilflow.hpp"
#include "mobnil/parallel.hpp"
#include "mobnil/phases.hpp"
#include "mobnil/sieve.hpp"
#include "mobnil/vaughan.hpp"
