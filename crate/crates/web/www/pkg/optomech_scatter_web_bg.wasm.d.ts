/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_model_free: (a: number, b: number) => void;
export const __wbg_occupation_free: (a: number, b: number) => void;
export const __wbg_spectrum_free: (a: number, b: number) => void;
export const model_levels: (a: number, b: number) => [number, number];
export const model_new: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const model_occupation: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const model_polaron_shift: (a: number) => number;
export const model_spectrum: (a: number, b: number, c: number, d: number) => [number, number, number];
export const occupation_delta_c: (a: number) => [number, number];
export const occupation_density: (a: number) => [number, number];
export const occupation_n_max: (a: number) => number;
export const occupation_s_r: (a: number) => [number, number];
export const occupation_s_t: (a: number) => [number, number];
export const occupation_total_r: (a: number) => number;
export const occupation_total_t: (a: number) => number;
export const spectrum_delta_c: (a: number) => [number, number];
export const spectrum_max_flux_error: (a: number) => number;
export const spectrum_n_max: (a: number) => number;
export const spectrum_reflection: (a: number) => [number, number];
export const spectrum_transmission: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
