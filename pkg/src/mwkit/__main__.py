from mwkit.cli import main

raise SystemExit(main())
