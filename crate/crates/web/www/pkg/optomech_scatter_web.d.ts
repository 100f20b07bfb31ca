/* tslint:disable */
/* eslint-disable */

export class Model {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * `[E_0^+, E_0^-, E_1^+, E_1^-, ...]` for phonon numbers `0..count`.
     */
    levels(count: number): Float64Array;
    /**
     * Couplings and rates in units of the mechanical frequency.
     */
    constructor(g0: number, lambda: number, gamma: number, gamma_a: number, delta_ac: number, direct: boolean);
    occupation(delta_0: number, d: number, min: number, max: number, points: number): Occupation;
    spectrum(min: number, max: number, points: number): Spectrum;
    readonly polaron_shift: number;
}

export class Occupation {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    delta_c(): Float64Array;
    density(): Float64Array;
    s_r(): Float64Array;
    s_t(): Float64Array;
    readonly n_max: number;
    readonly total_r: number;
    readonly total_t: number;
}

export class Spectrum {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    delta_c(): Float64Array;
    reflection(): Float64Array;
    transmission(): Float64Array;
    readonly max_flux_error: number;
    readonly n_max: number;
}

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_model_free: (a: number, b: number) => void;
    readonly __wbg_occupation_free: (a: number, b: number) => void;
    readonly __wbg_spectrum_free: (a: number, b: number) => void;
    readonly model_levels: (a: number, b: number) => [number, number];
    readonly model_new: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly model_occupation: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly model_polaron_shift: (a: number) => number;
    readonly model_spectrum: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly occupation_delta_c: (a: number) => [number, number];
    readonly occupation_density: (a: number) => [number, number];
    readonly occupation_n_max: (a: number) => number;
    readonly occupation_s_r: (a: number) => [number, number];
    readonly occupation_s_t: (a: number) => [number, number];
    readonly occupation_total_r: (a: number) => number;
    readonly occupation_total_t: (a: number) => number;
    readonly spectrum_delta_c: (a: number) => [number, number];
    readonly spectrum_max_flux_error: (a: number) => number;
    readonly spectrum_n_max: (a: number) => number;
    readonly spectrum_reflection: (a: number) => [number, number];
    readonly spectrum_transmission: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
