#pragma once

#include "snc/composite.hpp"
#include "snc/config.hpp"
#include "snc/corpus.hpp"
#include "snc/csv.hpp"
#include "snc/lexical.hpp"
#include "snc/pipeline.hpp"
#include "snc/report.hpp"
#include "snc/rhetoric.hpp"
#include "snc/semantic.hpp"
#include "snc/synthgen.hpp"
#include "snc/temporal.hpp"
#include "snc/text.hpp"
#include "snc/time.hpp"
#include "snc/types.hpp"
