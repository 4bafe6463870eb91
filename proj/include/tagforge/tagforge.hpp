#pragma once

// Umbrella header: the whole toolkit in one include.

#include "tagforge/chart.hpp"
#include "tagforge/compose.hpp"
#include "tagforge/deps.hpp"
#include "tagforge/derivation.hpp"
#include "tagforge/error.hpp"
#include "tagforge/gorn.hpp"
#include "tagforge/grammar.hpp"
#include "tagforge/grammar_io.hpp"
#include "tagforge/lexicon.hpp"
#include "tagforge/oracle.hpp"
#include "tagforge/oracle_check.hpp"
#include "tagforge/render.hpp"
