#pragma once

// Umbrella header. harness.hpp additionally needs libcrypto and threads.

#include "ocrbench/clustering.hpp"
#include "ocrbench/core_model.hpp"
#include "ocrbench/errors.hpp"
#include "ocrbench/extraction.hpp"
#include "ocrbench/ingest.hpp"
#include "ocrbench/metrics.hpp"
#include "ocrbench/pipeline.hpp"
#include "ocrbench/random.hpp"
#include "ocrbench/report.hpp"
#include "ocrbench/synthgen.hpp"
#include "ocrbench/unicode.hpp"
