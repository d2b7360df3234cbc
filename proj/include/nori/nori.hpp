#pragma once

#include "nori/ambient.hpp"
#include "nori/bigint.hpp"
#include "nori/certify.hpp"
#include "nori/codec.hpp"
#include "nori/corpus.hpp"
#include "nori/error.hpp"
#include "nori/gf.hpp"
#include "nori/grp.hpp"
#include "nori/io.hpp"
#include "nori/lattice.hpp"
#include "nori/liealg.hpp"
#include "nori/lietypes.hpp"
#include "nori/schreier_sims.hpp"
