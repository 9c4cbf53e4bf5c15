#pragma once

#include "aisinmaca/clonal_trainer.hpp"
#include "aisinmaca/errors.hpp"
#include "aisinmaca/evaluation.hpp"
#include "aisinmaca/features.hpp"
#include "aisinmaca/fuzzy_ca.hpp"
#include "aisinmaca/maca_model.hpp"
#include "aisinmaca/region_report.hpp"
#include "aisinmaca/seq_ingest.hpp"
