import os
import sys

# run the tests against the working tree without requiring an install
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "src"))
