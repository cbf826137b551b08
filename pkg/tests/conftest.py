import sys
from pathlib import Path

# Test modules import shared oracle helpers as plain modules.
sys.path.insert(0, str(Path(__file__).parent))
