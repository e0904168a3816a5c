/** Documented column sets for each result table the simulator CLI emits. */

export interface TableSchema {
  /** experiment/table name as used in CSV file names */
  name: string;
  /** required data columns, in no particular order */
  columns: string[];
  /** columns holding strings (everything else parses as float) */
  stringColumns: string[];
}

const META = ["params_hash", "seed", "version"];

const TABLES: TableSchema[] = [
  {
    name: "fig2a",
    columns: ["kappa", "C_formula", "C_numeric", "abs_discrepancy"],
    stringColumns: [],
  },
  {
    name: "fig2b",
    columns: [
      "gamma_over_alpha",
      "kappa",
      "t99_mean_ms",
      "t99_min_ms",
      "t99_max_ms",
      "t99_std_ms",
      "n_reached",
      "n_states",
      "log10_t99_mean",
    ],
    stringColumns: [],
  },
  {
    name: "fig3",
    columns: ["profile", "t_ms", "delta_omega_kHz", "concurrence"],
    stringColumns: ["profile"],
  },
  {
    name: "fig4",
    columns: ["profile", "gamma_n_kHz", "t_ms", "concurrence"],
    stringColumns: ["profile"],
  },
  {
    name: "fig5-decay",
    columns: [
      "sweep_value",
      "t_ms",
      "concurrence",
      "concurrence_no_offset",
      "delta_omega_f_kHz",
      "peak_reference",
    ],
    stringColumns: [],
  },
  {
    name: "fig5-asym",
    columns: [
      "sweep_value",
      "t_ms",
      "concurrence",
      "concurrence_no_offset",
      "delta_omega_f_kHz",
      "peak_reference",
    ],
    stringColumns: [],
  },
  {
    name: "fig6",
    columns: ["profile", "eta_g", "t_ms", "concurrence"],
    stringColumns: ["profile"],
  },
  {
    name: "offset-fit",
    columns: ["profile", "eta_omega", "C_final"],
    stringColumns: ["profile"],
  },
];

export const SCHEMAS: Map<string, TableSchema> = new Map(
  TABLES.map((t) => [t.name, t]),
);

export function expectedColumns(schema: TableSchema): string[] {
  return [...schema.columns, ...META];
}

export const PLOTTABLE = TABLES.map((t) => t.name);
