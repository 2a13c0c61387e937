#pragma once

// Umbrella header for the multiparallel alignment toolkit.

#include "mpalign/ablation.hpp"
#include "mpalign/alignment.hpp"
#include "mpalign/corpus_io.hpp"
#include "mpalign/error.hpp"
#include "mpalign/evaluation.hpp"
#include "mpalign/extraction.hpp"
#include "mpalign/link_prediction.hpp"
#include "mpalign/nmf.hpp"
#include "mpalign/pipeline.hpp"
#include "mpalign/rng.hpp"
#include "mpalign/score_matrix.hpp"
#include "mpalign/sentence_graph.hpp"
#include "mpalign/synth.hpp"
#include "mpalign/types.hpp"
