#pragma once

#include "streamqe/bigrams.hpp"
#include "streamqe/config.hpp"
#include "streamqe/embeddings.hpp"
#include "streamqe/emergence.hpp"
#include "streamqe/error.hpp"
#include "streamqe/evaluation.hpp"
#include "streamqe/expansion.hpp"
#include "streamqe/graph.hpp"
#include "streamqe/io.hpp"
#include "streamqe/kb.hpp"
#include "streamqe/lda.hpp"
#include "streamqe/pipeline.hpp"
#include "streamqe/porter.hpp"
#include "streamqe/report.hpp"
#include "streamqe/rng.hpp"
#include "streamqe/stream.hpp"
#include "streamqe/text.hpp"
