# Tests for s2rkit
