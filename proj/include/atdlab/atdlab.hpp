#pragma once

#include "atdlab/analysis.hpp"
#include "atdlab/error.hpp"
#include "atdlab/lexicon.hpp"
#include "atdlab/pack.hpp"
#include "atdlab/sentinel.hpp"
#include "atdlab/simnet.hpp"
#include "atdlab/text.hpp"
#include "atdlab/thread.hpp"
#include "atdlab/transform.hpp"
