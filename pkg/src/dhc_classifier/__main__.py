"""Main entry point when run with python -m dhc_classifier"""
from . import main

if __name__ == '__main__':
    main()
