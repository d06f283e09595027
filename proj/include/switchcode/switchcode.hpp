#pragma once

#include "switchcode/analysis.hpp"
#include "switchcode/config.hpp"
#include "switchcode/corpus.hpp"
#include "switchcode/counts.hpp"
#include "switchcode/lz.hpp"
#include "switchcode/markov.hpp"
#include "switchcode/repeats.hpp"
#include "switchcode/sources.hpp"
#include "switchcode/switch.hpp"
