#pragma once

#include "qbfscc/completeness.hpp"
#include "qbfscc/core.hpp"
#include "qbfscc/cp.hpp"
#include "qbfscc/errors.hpp"
#include "qbfscc/extraction.hpp"
#include "qbfscc/formula.hpp"
#include "qbfscc/frege.hpp"
#include "qbfscc/game.hpp"
#include "qbfscc/generators.hpp"
#include "qbfscc/hitting_set.hpp"
#include "qbfscc/json_io.hpp"
#include "qbfscc/line.hpp"
#include "qbfscc/pcr.hpp"
#include "qbfscc/qdimacs.hpp"
#include "qbfscc/qures.hpp"
#include "qbfscc/response.hpp"
#include "qbfscc/rng.hpp"
#include "qbfscc/scc.hpp"
#include "qbfscc/self_test.hpp"
#include "qbfscc/semantic_proof.hpp"
#include "qbfscc/semantics.hpp"
#include "qbfscc/study.hpp"
#include "qbfscc/twosat.hpp"
