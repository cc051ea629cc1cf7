#pragma once

#define ONTOFUSE_VERSION "0.1.0"
